#include "layerwave/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "layerwave/error.hpp"

namespace layerwave {

PhaseState phase_state(const InterfaceState& r) {
  PhaseState out;
  for (int i = 0; i < kInterfaces; ++i) out[i] = r[i].with_parity(Parity::full);
  return out;
}

PhaseState zero_phase_state(int fold, int count) {
  PhaseState out;
  for (auto& f : out) f = TrigSeries(fold, count, Parity::full);
  return out;
}

PhaseState operator+(const PhaseState& x, const PhaseState& y) {
  PhaseState out = x;
  for (int i = 0; i < kInterfaces; ++i) out[i] += y[i];
  return out;
}

PhaseState operator*(double k, const PhaseState& x) {
  PhaseState out = x;
  for (auto& f : out) f *= k;
  return out;
}

PhaseState shift(const PhaseState& x, double h) {
  PhaseState out;
  for (int i = 0; i < kInterfaces; ++i) out[i] = shift(x[i], h);
  return out;
}

PhaseState rhs(const LayerConfig& cfg, const PhaseState& r) {
  const TrigSeries field = antideriv(net_charge(r));
  PhaseState out;
  for (int i = 0; i < kInterfaces; ++i) {
    const TrigSeries dr = deriv(r[i]);
    TrigSeries v = -cfg[i] * dr;
    v -= multiply(r[i], dr);
    v += kSpeciesSign[i] * field;
    out[i] = v.with_parity(Parity::full);
  }
  return out;
}

double pairing(const TrigSeries& f, const TrigSeries& g) {
  double acc = 0.0;
  const int n = std::min(f.count(), g.count());
  for (int j = 1; j <= n; ++j) {
    acc += f.cos_coeff(j) * g.cos_coeff(j) + f.sin_coeff(j) * g.sin_coeff(j);
  }
  return 0.5 * acc;
}

EnergyReport energy(const LayerConfig& cfg, const PhaseState& r) {
  const int points = 4 * std::max(r[0].count(), 1);
  double kin = 0.0;
  for (int i = 0; i < kInterfaces; ++i) {
    double mean_cube = 0.0;
    for (double v : sample(r[i], points)) {
      const double u = cfg[i] + v;
      mean_cube += u * u * u;
    }
    kin += kLevelSign[i] * mean_cube / points / 6.0;
  }
  const TrigSeries d = net_charge(r);
  const double pot = -0.5 * pairing(d, inverse_laplacian(d));
  // Means are not representable in a TrigSeries, so neutrality holds exactly.
  return EnergyReport{kin, pot, kin + pot, 0.0};
}

Gradient grad_energy(const LayerConfig& cfg, const PhaseState& r) {
  const TrigSeries potential = inverse_laplacian(net_charge(r));
  Gradient g;
  for (int i = 0; i < kInterfaces; ++i) {
    const OffsetSeries speed{cfg[i], r[i]};
    OffsetSeries half_square = multiply(speed, speed);
    half_square.mean *= 0.5;
    half_square.wave *= 0.5;
    half_square.wave -= kSpeciesSign[i] * potential;
    half_square.mean *= kLevelSign[i];
    half_square.wave *= kLevelSign[i];
    g[i] = half_square;
  }
  return g;
}

PhaseState apply_J(const Gradient& g) {
  PhaseState out;
  for (int i = 0; i < kInterfaces; ++i) {
    out[i] = (-kLevelSign[i] * deriv(g[i].wave)).with_parity(Parity::full);
  }
  return out;
}

double max_stable_dt(const LayerConfig& cfg, const PhaseState& r) {
  const int n = r[0].count();
  double speed = 0.0;
  for (int i = 0; i < kInterfaces; ++i) {
    for (double v : sample(r[i], 16 * std::max(n, 1))) speed = std::max(speed, std::abs(cfg[i] + v));
  }
  if (speed == 0.0) return std::numeric_limits<double>::infinity();
  return 0.5 / (static_cast<double>(n) * r[0].fold() * speed);
}

namespace {

TrajectoryRecord record(const LayerConfig& cfg, double t, const PhaseState& r) {
  TrajectoryRecord rec{t, energy(cfg, r), {}};
  for (int i = 0; i < kInterfaces; ++i) rec.sup[i] = sup_norm(r[i], 4 * std::max(r[i].count(), 1));
  return rec;
}

bool finite(const PhaseState& r) {
  return std::all_of(r.begin(), r.end(), [](const TrigSeries& f) { return f.is_finite(); });
}

}  // namespace

Trajectory evolve(const LayerConfig& cfg, const PhaseState& r0, double dt, int steps,
                  const EvolveOptions& opts) {
  if (!(dt > 0.0) || steps < 0) {
    throw Error(ErrorCode::invalid_argument, "time step must be positive and steps non-negative");
  }
  if (!finite(r0)) throw Error(ErrorCode::evolution_diverged, "non-finite initial state");
  const double bound = max_stable_dt(cfg, r0);
  if (dt > bound) {
    throw Error(ErrorCode::invalid_argument,
                "time step " + std::to_string(dt) + " exceeds the stability bound " +
                    std::to_string(bound));
  }

  Trajectory traj;
  PhaseState r = r0;
  if (opts.log_every > 0) traj.log.push_back(record(cfg, 0.0, r));
  if (opts.snapshot_every > 0) traj.snapshots.emplace_back(0.0, r);

  for (int step = 1; step <= steps; ++step) {
    const PhaseState k1 = rhs(cfg, r);
    const PhaseState k2 = rhs(cfg, r + (0.5 * dt) * k1);
    const PhaseState k3 = rhs(cfg, r + (0.5 * dt) * k2);
    const PhaseState k4 = rhs(cfg, r + dt * k3);
    r = r + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!finite(r)) {
      throw Error(ErrorCode::evolution_diverged,
                  "non-finite state after step " + std::to_string(step));
    }
    const double t = step * dt;
    if (opts.log_every > 0 && (step % opts.log_every == 0 || step == steps)) {
      traj.log.push_back(record(cfg, t, r));
    }
    if (opts.snapshot_every > 0 && step % opts.snapshot_every == 0) {
      traj.snapshots.emplace_back(t, r);
    }
  }
  traj.final_state = r;
  return traj;
}

}  // namespace layerwave
