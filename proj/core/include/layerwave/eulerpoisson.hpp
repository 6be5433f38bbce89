#pragma once

// Two-fluid Euler-Poisson view of the symmetric layer configuration
// (-a, a, -a, a): density and velocity are half the strip width and the
// strip midline, and the pressure law is rho^3 / 3.

#include <array>

#include "layerwave/pencil.hpp"
#include "layerwave/spectral.hpp"
#include "layerwave/steady.hpp"

namespace layerwave {

struct EPState {
  double a;
  double c;
  OffsetSeries rho_plus;
  OffsetSeries rho_minus;
  OffsetSeries u_plus;
  OffsetSeries u_minus;
};

/// Half-width a of a symmetric configuration; throws regime_mismatch otherwise.
double symmetric_half_width(const LayerConfig& cfg);

/// rho = a + (r2 - r1) / 2, u = (r2 + r1) / 2 per species.
EPState map_to_ep(const LayerConfig& cfg, double c, const InterfaceState& r);
EPState map_to_ep(const WaveSolution& sol);
/// r2 = u + rho - a, r1 = u - rho + a.
InterfaceState map_from_ep(const EPState& ep);

struct EPResidual {
  std::array<TrigSeries, 2> continuity;  // ions, electrons
  std::array<TrigSeries, 2> momentum;
  std::array<double, 2> momentum_mean;  // net force; derivative terms have none
  double continuity_sup;  // coefficient sup
  double momentum_sup;
  double max() const { return continuity_sup > momentum_sup ? continuity_sup : momentum_sup; }
};

/// Traveling-frame residuals with products kept on the full convolution range.
EPResidual ep_residual(const EPState& s);

/// Minimum of both densities on a grid of `points` nodes per period.
double min_density(const EPState& s, int points);

struct EPSpeeds {
  double c_minus;  // admissible determinant roots
  double c_plus;
  double factor_two_formula;   // a sqrt(1 + 2 / (a m^2))
  double factor_four_formula;  // a sqrt(1 + 4 / (a m^2))
  /// 2 or 4: the closed form closest to the determinant root.
  int matching_factor;
};

EPSpeeds ep_speeds(double a, int m);

}  // namespace layerwave
