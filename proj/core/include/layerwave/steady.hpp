#pragma once

// Traveling-wave residual of the four-interface system, its Jacobian in the
// interface profiles, and the strip-width / relative-speed monitors.

#include <Eigen/Dense>
#include <array>

#include "layerwave/pencil.hpp"
#include "layerwave/spectral.hpp"

namespace layerwave {

/// Four zero-mean even cosine series sharing fold and count.
struct InterfaceState {
  std::array<TrigSeries, 4> comp;

  static InterfaceState zero(int fold, int count);
  /// amplitude_i * cos(harmonic * fold * x) in component i.
  static InterfaceState mode(int fold, int count, int harmonic, const Eigen::Vector4d& amplitude);

  int fold() const { return comp[0].fold(); }
  int count() const { return comp[0].count(); }
  TrigSeries& operator[](int i) { return comp[i]; }
  const TrigSeries& operator[](int i) const { return comp[i]; }

  void check_invariants() const;
};

/// Four series of arbitrary parity; residuals and velocities use this.
using SeriesQuad = std::array<TrigSeries, 4>;

/// Stacks cosine coefficients component-major: index i*N + (j-1).
Eigen::VectorXd flatten(const InterfaceState& r);
InterfaceState unflatten(int fold, int count, const Eigen::VectorXd& x);
/// Stacks sine coefficients of an odd quad the same way.
Eigen::VectorXd flatten_sine(const SeriesQuad& f);

InterfaceState operator+(const InterfaceState& x, const InterfaceState& y);
InterfaceState operator-(const InterfaceState& x, const InterfaceState& y);
InterfaceState operator*(double k, const InterfaceState& x);

InterfaceState shift(const InterfaceState& r, double h);
InterfaceState resized(const InterfaceState& r, int count);

/// Max over components of the Sobolev-analytic norm.
double norm(const InterfaceState& r, const NormParams& p);
double tail_norm(const InterfaceState& r, const NormParams& p, int first);
double sup_abs_coeff(const SeriesQuad& f);

/// Net charge d = r+2 - r+1 - r-2 + r-1 of any four series.
TrigSeries net_charge(const SeriesQuad& r);

SeriesQuad residual_F(const LayerConfig& cfg, double c, const InterfaceState& r);

/// Dense d_r F: columns are cosine coefficients of the perturbation, rows are
/// sine coefficients of the residual, both in flatten() order.
Eigen::MatrixXd jacobian_dr(const LayerConfig& cfg, double c, const InterfaceState& r);

/// d_r F applied to h without assembling the matrix.
SeriesQuad apply_jacobian(const LayerConfig& cfg, double c, const InterfaceState& r,
                          const InterfaceState& h);

SeriesQuad dF_dc(const LayerConfig& cfg, double c, const InterfaceState& r);

struct Monitors {
  double m1;  // narrowest strip
  double m2;  // slowest interface relative to the wave
};

/// Minima over a grid of 16*N nodes per period, each local minimum refined
/// by Newton's method on the derivative.
Monitors monitors(const LayerConfig& cfg, double c, const InterfaceState& r);

struct WaveSolution {
  LayerConfig cfg;
  double c;
  InterfaceState state;
  double residual_norm;  // coefficient sup of residual_F
  Monitors monitors;
};

WaveSolution make_solution(const LayerConfig& cfg, double c, const InterfaceState& r);

}  // namespace layerwave
