#pragma once

// Pseudo-arclength continuation of pitchfork branches from the flat state.
//
// The unknown is X = (c, cosine coefficients of the four profiles) with the
// Euclidean norm; each step predicts along the unit tangent and corrects with
// Newton's method on [F(c, r); <t, X - X_k> - h] = 0.

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "layerwave/localbranch.hpp"
#include "layerwave/steady.hpp"

namespace layerwave {

struct NewtonOptions {
  double tol = 1e-11;  // coefficient sup of the residual
  int max_iterations = 25;
};

struct ContinuationOptions {
  NewtonOptions newton;
  NormParams norm;
  int count = 64;
  int max_count = 256;
  double s0 = 1e-3;  // local branch parameter of the first point
  double h_min = 1e-7;
  double h_max = 0.1;
  double grow = 1.3;
  int fast_iterations = 3;
  int max_points = 400;
  double blow_up = 1e6;
  double monitor_floor = 1e-6;
  double loop_tol = 1e-8;
  double loop_min_factor = 10.0;  // loops need arclength >= factor * s0
  double tail_fraction = 0.25;
  double tail_threshold = 1e-8;
  /// Optional early stop after an accepted point; the branch then stays
  /// "running" with a detail note.
  std::function<bool(const WaveSolution&)> stop_when;
};

/// <tangent, X - anchor> = ds. An empty tangent pins c to anchor(0) instead.
struct ArclengthConstraint {
  Eigen::VectorXd tangent;
  Eigen::VectorXd anchor;
  double ds = 0.0;
};

Eigen::VectorXd pack(double c, const InterfaceState& r);
std::pair<double, InterfaceState> unpack(int fold, int count, const Eigen::VectorXd& x);

struct NewtonResult {
  WaveSolution solution;
  int iterations;
  std::vector<double> history;  // merit of every iterate, starting at the guess
};

/// Throws correction_failed on non-finite input or without convergence.
NewtonResult newton_correct(const LayerConfig& cfg, double c, const InterfaceState& guess,
                            const ArclengthConstraint& constraint, const NewtonOptions& opt);

/// Unit tangent of the solution curve oriented along `previous`.
Eigen::VectorXd curve_tangent(const LayerConfig& cfg, double c, const InterfaceState& r,
                              const Eigen::VectorXd& previous);

enum TerminationFlag : unsigned {
  kRunning = 0,
  kLoop = 1u << 0,
  kBlowUp = 1u << 1,
  kCollision = 1u << 2,
  kDegeneracy = 1u << 3,
  kStepLimit = 1u << 4,
};

struct Termination {
  unsigned flags = kRunning;
  double period = 0.0;  // arclength of a detected loop
  std::string detail;
};

/// "running", or the triggered labels joined with '+'.
std::string to_string(const Termination& t);

struct BranchPoint {
  double s;  // accumulated pseudo-arclength
  WaveSolution solution;
  Eigen::VectorXd tangent;
  double next_step;
  int iterations;
};

struct Branch {
  LocalExpansion origin;
  int arm;  // +1 or -1
  std::vector<BranchPoint> points;
  Termination termination;
};

/// Smallest n with m1, m2 >= 1/n, |c| <= n and |r| <= n.
int compact_index(const WaveSolution& sol, const NormParams& p);

Termination detect_termination(const Branch& branch, const ContinuationOptions& opts);

/// Traces one arm (+1 or -1) until a termination flag is raised. Throws
/// cannot_start if the first correction fails.
Branch continue_branch(const LocalExpansion& origin, int arm, const ContinuationOptions& opts);

/// Both arms, traced concurrently.
std::array<Branch, 2> continue_both_arms(const LocalExpansion& origin,
                                         const ContinuationOptions& opts);

/// Restarts from stored point `index` and continues with the same options.
Branch resume(const Branch& branch, std::size_t index, const ContinuationOptions& opts);

}  // namespace layerwave
