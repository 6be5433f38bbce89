#include "layerwave/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <optional>

#include "layerwave/error.hpp"

namespace layerwave {

Eigen::VectorXd pack(double c, const InterfaceState& r) {
  const Eigen::VectorXd coeffs = flatten(r);
  Eigen::VectorXd x(coeffs.size() + 1);
  x(0) = c;
  x.tail(coeffs.size()) = coeffs;
  return x;
}

std::pair<double, InterfaceState> unpack(int fold, int count, const Eigen::VectorXd& x) {
  return {x(0), unflatten(fold, count, x.tail(x.size() - 1))};
}

namespace {

// Re-lays a packed vector for a larger truncation, zero-filling new harmonics.
Eigen::VectorXd pad(const Eigen::VectorXd& x, int from, int to) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(kInterfaces * to + 1);
  out(0) = x(0);
  for (int i = 0; i < kInterfaces; ++i) {
    out.segment(1 + i * to, from) = x.segment(1 + i * from, from);
  }
  return out;
}

Eigen::MatrixXd augmented_jacobian(const LayerConfig& cfg, double c, const InterfaceState& r) {
  const int n = kInterfaces * r.count();
  Eigen::MatrixXd A(n, n + 1);
  A.col(0) = flatten_sine(dF_dc(cfg, c, r));
  A.rightCols(n) = jacobian_dr(cfg, c, r);
  return A;
}

struct Evaluation {
  Eigen::VectorXd residual;  // sine coefficients, then the constraint
  double residual_sup;
  double constraint;
  double merit() const { return std::max(residual_sup, std::abs(constraint)); }
};

Evaluation evaluate_system(const LayerConfig& cfg, const Eigen::VectorXd& x, int fold, int count,
                           const ArclengthConstraint& con) {
  const auto [c, r] = unpack(fold, count, x);
  const Eigen::VectorXd f = flatten_sine(residual_F(cfg, c, r));
  const double g = con.tangent.size() == 0 ? x(0) - con.anchor(0)
                                           : con.tangent.dot(x - con.anchor) - con.ds;
  Evaluation e;
  e.residual.resize(f.size() + 1);
  e.residual.head(f.size()) = f;
  e.residual(f.size()) = g;
  e.residual_sup = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
  e.constraint = g;
  return e;
}

double distance(const WaveSolution& x, const WaveSolution& y, const NormParams& p) {
  const int n = std::max(x.state.count(), y.state.count());
  return norm(resized(x.state, n) - resized(y.state, n), p) + std::abs(x.c - y.c);
}

}  // namespace

NewtonResult newton_correct(const LayerConfig& cfg, double c, const InterfaceState& guess,
                            const ArclengthConstraint& con, const NewtonOptions& opt) {
  const int fold = guess.fold();
  const int count = guess.count();
  Eigen::VectorXd x = pack(c, guess);
  if (!x.allFinite()) throw Error(ErrorCode::correction_failed, "non-finite initial guess");
  if (con.tangent.size() != 0 && con.tangent.size() != x.size()) {
    throw Error(ErrorCode::invalid_argument, "constraint size does not match the state");
  }

  Evaluation e = evaluate_system(cfg, x, fold, count, con);
  std::vector<double> history{e.merit()};
  for (int it = 0;; ++it) {
    if (e.residual_sup <= opt.tol && std::abs(e.constraint) <= opt.tol) {
      const auto [cc, r] = unpack(fold, count, x);
      return NewtonResult{make_solution(cfg, cc, r), it, history};
    }
    if (it == opt.max_iterations) break;

    const auto [cc, r] = unpack(fold, count, x);
    Eigen::MatrixXd A(x.size(), x.size());
    A.topRows(x.size() - 1) = augmented_jacobian(cfg, cc, r);
    if (con.tangent.size() == 0) {
      A.row(x.size() - 1).setZero();
      A(x.size() - 1, 0) = 1.0;
    } else {
      A.row(x.size() - 1) = con.tangent.transpose();
    }
    const Eigen::VectorXd delta = A.partialPivLu().solve(-e.residual);
    if (!delta.allFinite()) break;

    double lambda = 1.0;
    Eigen::VectorXd trial = x + delta;
    Evaluation et = evaluate_system(cfg, trial, fold, count, con);
    while (!(et.merit() < e.merit()) && lambda > 1.0 / 64.0) {
      lambda *= 0.5;
      trial = x + lambda * delta;
      et = evaluate_system(cfg, trial, fold, count, con);
    }
    if (!trial.allFinite() || !std::isfinite(et.merit())) break;
    x = trial;
    e = et;
    history.push_back(e.merit());
  }
  throw Error(ErrorCode::correction_failed,
              "Newton correction did not converge (last merit " + std::to_string(e.merit()) + ")");
}

Eigen::VectorXd curve_tangent(const LayerConfig& cfg, double c, const InterfaceState& r,
                              const Eigen::VectorXd& previous) {
  const int n = kInterfaces * r.count() + 1;
  Eigen::MatrixXd B(n, n);
  B.topRows(n - 1) = augmented_jacobian(cfg, c, r);
  B.row(n - 1) = previous.transpose();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::VectorXd t = B.partialPivLu().solve(rhs);
  if (!t.allFinite() || t.norm() == 0.0) {
    throw Error(ErrorCode::correction_failed, "tangent system is singular");
  }
  return t / t.norm();
}

std::string to_string(const Termination& t) {
  if (t.flags == kRunning) return "running";
  std::string out;
  auto add = [&](unsigned flag, const char* label) {
    if (!(t.flags & flag)) return;
    if (!out.empty()) out += '+';
    out += label;
  };
  add(kLoop, "loop");
  add(kBlowUp, "blow_up");
  add(kCollision, "collision");
  add(kDegeneracy, "degeneracy");
  add(kStepLimit, "step_limit");
  return out;
}

int compact_index(const WaveSolution& sol, const NormParams& p) {
  const double need = std::max({1.0 / sol.monitors.m1, 1.0 / sol.monitors.m2, std::abs(sol.c),
                                norm(sol.state, p), 1.0});
  return static_cast<int>(std::ceil(need));
}

Termination detect_termination(const Branch& branch, const ContinuationOptions& opts) {
  Termination t;
  if (branch.points.size() < 2) return t;
  const BranchPoint& last = branch.points.back();
  const WaveSolution& sol = last.solution;

  if (1.0 + std::abs(sol.c) + norm(sol.state, opts.norm) >= opts.blow_up) t.flags |= kBlowUp;
  if (sol.monitors.m1 <= opts.monitor_floor) t.flags |= kCollision;
  if (sol.monitors.m2 <= opts.monitor_floor) t.flags |= kDegeneracy;
  const BranchPoint& first = branch.points.front();
  if (last.s - first.s >= opts.loop_min_factor * opts.s0 &&
      distance(sol, first.solution, opts.norm) <= opts.loop_tol) {
    t.flags |= kLoop;
    t.period = last.s - first.s;
  }
  if (static_cast<int>(branch.points.size()) >= opts.max_points) t.flags |= kStepLimit;
  if (t.flags != kRunning) {
    const int n = sol.state.count();
    const double total = norm(sol.state, opts.norm);
    const int first = n - static_cast<int>(opts.tail_fraction * n) + 1;
    if (total > 0.0 && tail_norm(sol.state, opts.norm, first) > opts.tail_threshold * total) {
      t.detail = "truncation unresolved at N=" + std::to_string(n);
    }
  }
  return t;
}

namespace {

// Newton with the truncation doubled while the upper harmonics carry weight.
NewtonResult correct_with_tail_guard(const LayerConfig& cfg, double c, InterfaceState guess,
                                     ArclengthConstraint con, const ContinuationOptions& opts) {
  NewtonResult res = newton_correct(cfg, c, guess, con, opts.newton);
  for (;;) {
    const InterfaceState& r = res.solution.state;
    const int n = r.count();
    const int first = n - static_cast<int>(opts.tail_fraction * n) + 1;
    const double total = norm(r, opts.norm);
    if (n * 2 > opts.max_count || total == 0.0 ||
        tail_norm(r, opts.norm, first) <= opts.tail_threshold * total) {
      return res;
    }
    if (con.tangent.size() != 0) con.tangent = pad(con.tangent, n, 2 * n);
    con.anchor = pad(con.anchor, n, 2 * n);
    const int iterations = res.iterations;
    res = newton_correct(cfg, res.solution.c, resized(r, 2 * n), con, opts.newton);
    res.iterations += iterations;
  }
}

Eigen::VectorXd fit_to(const Eigen::VectorXd& x, int count) {
  const int from = static_cast<int>((x.size() - 1) / kInterfaces);
  return from == count ? x : pad(x, from, count);
}

void extend(Branch& branch, const ContinuationOptions& opts) {
  const LayerConfig& cfg = branch.origin.cfg;
  const int fold = branch.origin.m;
  branch.termination = detect_termination(branch, opts);
  double h = branch.points.back().next_step;

  while (branch.termination.flags == kRunning) {
    const BranchPoint& cur = branch.points.back();
    const int count = cur.solution.state.count();
    const Eigen::VectorXd x0 = pack(cur.solution.c, cur.solution.state);
    const Eigen::VectorXd t0 = fit_to(cur.tangent, count);

    std::optional<NewtonResult> res;
    try {
      const auto [c, r] = unpack(fold, count, x0 + h * t0);
      res = correct_with_tail_guard(cfg, c, r, ArclengthConstraint{t0, x0, h}, opts);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::correction_failed) throw;
      h *= 0.5;
      if (h < opts.h_min) {
        branch.termination.flags |= kStepLimit;
        branch.termination.detail = "step size fell below h_min";
        return;
      }
      continue;
    }

    const InterfaceState& r = res->solution.state;
    Eigen::VectorXd t1 = curve_tangent(cfg, res->solution.c, r, fit_to(t0, r.count()));
    const double next =
        res->iterations <= opts.fast_iterations ? std::min(h * opts.grow, opts.h_max) : h;
    branch.points.push_back(BranchPoint{cur.s + h, res->solution, t1, next, res->iterations});
    h = next;
    branch.termination = detect_termination(branch, opts);
    if (branch.termination.flags != kRunning) return;
    if (opts.stop_when && opts.stop_when(branch.points.back().solution)) {
      branch.termination.detail = "stopped on request";
      return;
    }

    // Near the starting point, land exactly on the hyperplane through it.
    const BranchPoint& now = branch.points.back();
    const BranchPoint& start = branch.points.front();
    const double gap = distance(now.solution, start.solution, opts.norm);
    if (now.s - start.s >= opts.loop_min_factor * opts.s0 && gap <= 2.0 * h) {
      const int n = now.solution.state.count();
      const Eigen::VectorXd anchor = pack(start.solution.c, resized(start.solution.state, n));
      try {
        NewtonResult land = newton_correct(cfg, now.solution.c, now.solution.state,
                                           ArclengthConstraint{now.tangent, anchor, 0.0},
                                           opts.newton);
        if (distance(land.solution, start.solution, opts.norm) <= opts.loop_tol) {
          const double step = (pack(land.solution.c, land.solution.state) -
                               pack(now.solution.c, now.solution.state))
                                  .norm();
          branch.points.push_back(
              BranchPoint{now.s + step, land.solution, now.tangent, h, land.iterations});
          branch.termination = detect_termination(branch, opts);
        }
      } catch (const Error& err) {
        if (err.code() != ErrorCode::correction_failed) throw;
      }
    }
  }
}

}  // namespace

Branch continue_branch(const LocalExpansion& origin, int arm, const ContinuationOptions& opts) {
  if (arm != 1 && arm != -1) throw Error(ErrorCode::invalid_argument, "arm must be +1 or -1");
  if (std::abs(origin.transversality) < 1e-10) {
    throw Error(ErrorCode::cannot_start, "transversality vanishes at the bifurcation point");
  }
  const LayerConfig& cfg = origin.cfg;
  const int count = opts.count;
  const double v_norm = origin.v0.norm();

  Branch branch{origin, arm, {}, {}};
  const WaveSolution flat = make_solution(cfg, origin.c_star, InterfaceState::zero(origin.m, count));
  Eigen::VectorXd t0 =
      pack(0.0, InterfaceState::mode(origin.m, count, 1, (arm / v_norm) * origin.v0));
  branch.points.push_back(BranchPoint{0.0, flat, t0, opts.s0 * v_norm, 0});

  const auto [c_pred, r_pred] = predictor(origin, arm * opts.s0, count);
  const Eigen::VectorXd x0 = pack(flat.c, flat.state);
  const double ds = t0.dot(pack(c_pred, r_pred) - x0);
  std::optional<NewtonResult> res;
  try {
    res = correct_with_tail_guard(cfg, c_pred, r_pred, ArclengthConstraint{t0, x0, ds}, opts);
  } catch (const Error& err) {
    throw Error(ErrorCode::cannot_start,
                std::string("first correction from the local predictor failed: ") + err.what());
  }
  const InterfaceState& r = res->solution.state;
  Eigen::VectorXd t1 = curve_tangent(cfg, res->solution.c, r, fit_to(t0, r.count()));
  const double next =
      res->iterations <= opts.fast_iterations ? std::min(ds * opts.grow, opts.h_max) : ds;
  branch.points.push_back(BranchPoint{ds, res->solution, t1, next, res->iterations});

  extend(branch, opts);
  return branch;
}

std::array<Branch, 2> continue_both_arms(const LocalExpansion& origin,
                                         const ContinuationOptions& opts) {
  auto plus = std::async(std::launch::async, [&] { return continue_branch(origin, +1, opts); });
  Branch minus = continue_branch(origin, -1, opts);
  return {plus.get(), std::move(minus)};
}

Branch resume(const Branch& branch, std::size_t index, const ContinuationOptions& opts) {
  if (index >= branch.points.size()) {
    throw Error(ErrorCode::invalid_argument, "resume index past the end of the branch");
  }
  Branch out{branch.origin, branch.arm,
             {branch.points.begin(), branch.points.begin() + static_cast<long>(index) + 1},
             {}};
  if (out.points.size() < 2) {
    return continue_branch(branch.origin, branch.arm, opts);
  }
  extend(out, opts);
  return out;
}

}  // namespace layerwave
