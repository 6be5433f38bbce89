#pragma once

// Time evolution of the four interfaces in Hamiltonian form, used to check
// traveling waves against the full dynamics.

#include <array>
#include <vector>

#include "layerwave/pencil.hpp"
#include "layerwave/spectral.hpp"
#include "layerwave/steady.hpp"

namespace layerwave {

/// Four zero-mean series of full parity; traveling waves leave the even class.
using PhaseState = SeriesQuad;

PhaseState phase_state(const InterfaceState& r);
PhaseState zero_phase_state(int fold, int count);

PhaseState operator+(const PhaseState& x, const PhaseState& y);
PhaseState operator*(double k, const PhaseState& x);
PhaseState shift(const PhaseState& x, double h);

PhaseState rhs(const LayerConfig& cfg, const PhaseState& r);

struct EnergyReport {
  double e_kin;
  double e_pot;
  double e_total;
  double neutrality_defect;
};

/// Energies per unit length: (1/2pi) times the integrals over the torus.
EnergyReport energy(const LayerConfig& cfg, const PhaseState& r);

using Gradient = std::array<OffsetSeries, 4>;

/// Gradient of the energy for the pairing (1/2pi) int u v dx.
Gradient grad_energy(const LayerConfig& cfg, const PhaseState& r);

/// diag(d/dx, -d/dx, d/dx, -d/dx); constants are annihilated.
PhaseState apply_J(const Gradient& g);

/// (1/2pi) int f g dx for zero-mean series.
double pairing(const TrigSeries& f, const TrigSeries& g);

/// Largest dt allowed by the explicit step bound 0.5 / (N m max|a + r|).
double max_stable_dt(const LayerConfig& cfg, const PhaseState& r);

struct TrajectoryRecord {
  double t;
  EnergyReport energy;
  std::array<double, 4> sup;  // grid sup-norm per component
};

struct Trajectory {
  std::vector<TrajectoryRecord> log;
  std::vector<std::pair<double, PhaseState>> snapshots;
  PhaseState final_state;
};

struct EvolveOptions {
  int log_every = 1;        // 0 disables energy logging
  int snapshot_every = 0;   // 0 keeps only the final state
};

/// Classical four-stage Runge-Kutta. Throws invalid_argument when dt breaks
/// the step bound and evolution_diverged on non-finite states.
Trajectory evolve(const LayerConfig& cfg, const PhaseState& r0, double dt, int steps,
                  const EvolveOptions& opts = {});

}  // namespace layerwave
