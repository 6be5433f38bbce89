#pragma once

// Small-amplitude data at a bifurcation speed: kernel mode, Hessian action,
// the second-harmonic correction theta0, the curvature c''(0) of the speed
// along the branch, and the first-order predictor.

#include <Eigen/Dense>
#include <utility>

#include "layerwave/pencil.hpp"
#include "layerwave/steady.hpp"

namespace layerwave {

enum class Pitchfork { supercritical, subcritical, degenerate };

const char* to_string(Pitchfork p);

/// Component-wise d/dx(h_i * h2_i); independent of the configuration and speed.
SeriesQuad hessian_action(const InterfaceState& h, const InterfaceState& h2);

struct Theta0 {
  Eigen::Vector4d amplitude;  // coefficient of cos(2 m x) per component
  double residual;            // of the 4x4 solve
};

/// Solves M_{2m}(a, c) A = 2 m^2 (a - c)^{-2}; throws resonant_second_harmonic
/// when M_{2m} is numerically singular.
Theta0 theta0(int m, const LayerConfig& cfg, double c_star);

double c_second_derivative(int m, const LayerConfig& cfg, double c_star);

struct LocalExpansion {
  int m;
  LayerConfig cfg;
  double c_star;
  Eigen::Vector4d v0;
  Eigen::Vector4d w0;
  Eigen::Vector4d w0_tilde;
  double transversality;
  Eigen::Vector4d theta0_amplitude;
  double c_second;
  Pitchfork pitchfork;
  int nearest_component;
};

LocalExpansion local_expansion(int m, const LayerConfig& cfg, double c_star);

/// (c_star + c''(0) s^2 / 2, s v0 cos(m x)) with `count` retained harmonics.
std::pair<double, InterfaceState> predictor(const LocalExpansion& loc, double s, int count);

/// Branch parameter of a state: projection of its first harmonic on v0.
double branch_parameter(const LocalExpansion& loc, const InterfaceState& r);

}  // namespace layerwave
