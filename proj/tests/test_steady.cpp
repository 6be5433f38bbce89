#include <doctest.h>

#include <cmath>
#include <numbers>

#include <layerwave/io.hpp>
#include <layerwave/steady.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace layerwave;
using doctest::Approx;

namespace {

const double kRoot5 = std::sqrt(5.0);

SeriesQuad lincomb(const SeriesQuad& x, double k, const SeriesQuad& y) {
  SeriesQuad out;
  for (int i = 0; i < 4; ++i) out[i] = x[i] + k * y[i];
  return out;
}

double quad_diff(const SeriesQuad& x, const SeriesQuad& y) { return sup_abs_coeff(lincomb(x, -1.0, y)); }

// Minimum of |g| over a very fine grid, for the monitor oracle.
double brute_min_abs(const TrigSeries& g, double offset) {
  const int points = 1 << 20;
  const double period = 2.0 * std::numbers::pi / g.fold();
  double best = std::numeric_limits<double>::infinity();
  for (int p = 0; p < points; ++p) best = std::min(best, std::abs(evaluate(g, period * p / points) + offset));
  return best;
}

}  // namespace

TEST_SUITE("steady") {
  TEST_CASE("flat state solves for every speed") {
    for (double c : {-3.0, 0.0, 0.5, kRoot5}) {
      for (const auto* cfg : {&fixture::symmetric(), &fixture::successive(), &fixture::generic()}) {
        CHECK(sup_abs_coeff(residual_F(*cfg, c, InterfaceState::zero(2, 8))) == 0.0);
      }
    }
  }

  TEST_CASE("parity contract and shared shape") {
    std::mt19937 rng(oracle::kSeed);
    for (int t = 0; t < 10; ++t) {
      const auto r = oracle::random_state(rng, 1 + t % 3, 10, 0.3);
      r.check_invariants();
      const auto F = residual_F(fixture::generic(), 0.7, r);
      for (const auto& f : F) {
        CHECK(f.parity() == Parity::odd_sine);
        CHECK(f.count() == 10);
        CHECK(f.fold() == r.fold());
      }
      for (const auto& f : dF_dc(fixture::generic(), 0.7, r)) CHECK(f.parity() == Parity::odd_sine);
    }
  }

  TEST_CASE("flat-state linearization is the pencil multiplier") {
    const auto& cfg = fixture::generic();
    const double c = 0.37;
    const int m = 2, N = 6;
    const Eigen::MatrixXd J = jacobian_dr(cfg, c, InterfaceState::zero(m, N));
    for (int j = 1; j <= N; ++j) {
      const Eigen::Matrix4d expect = -pencil_matrix(j * m, cfg, c) / (j * m);
      for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < 4; ++k) {
          CHECK(J(i * N + j - 1, k * N + j - 1) == Approx(expect(i, k)).epsilon(1e-14));
        }
      }
    }
    Eigen::MatrixXd off = J;
    for (int j = 1; j <= N; ++j) {
      for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < 4; ++k) off(i * N + j - 1, k * N + j - 1) = 0.0;
      }
    }
    CHECK(off.norm() == 0.0);

    // F(eps h)/eps approaches the linearization
    std::mt19937 rng(oracle::kSeed + 1);
    const auto h = oracle::random_state(rng, m, N, 1.0);
    const double eps = 1e-7;
    const Eigen::VectorXd fd = flatten_sine(residual_F(cfg, c, eps * h)) / eps;
    CHECK((fd - J * flatten(h)).cwiseAbs().maxCoeff() <= 1e-6 * (J * flatten(h)).cwiseAbs().maxCoeff());
  }

  TEST_CASE("Jacobian matches central differences") {
    std::mt19937 rng(oracle::kSeed + 2);
    const auto& cfg = fixture::symmetric();
    for (int t = 0; t < 5; ++t) {
      const auto r = oracle::random_state(rng, 1, 12, 0.2);
      const auto h = oracle::random_state(rng, 1, 12, 1.0);
      const double c = 0.3 * t;
      const double eps = 1e-7;
      const Eigen::VectorXd fd = (flatten_sine(residual_F(cfg, c, r + eps * h)) -
                                  flatten_sine(residual_F(cfg, c, r - eps * h))) / (2 * eps);
      const Eigen::VectorXd op = jacobian_dr(cfg, c, r) * flatten(h);
      CHECK((fd - op).norm() <= 1e-6 * op.norm());
      CHECK((flatten_sine(apply_jacobian(cfg, c, r, h)) - op).norm() <= 1e-13 * op.norm());

      const Eigen::VectorXd fdc = (flatten_sine(residual_F(cfg, c + eps, r)) -
                                   flatten_sine(residual_F(cfg, c - eps, r))) / (2 * eps);
      const Eigen::VectorXd dc = flatten_sine(dF_dc(cfg, c, r));
      CHECK((fdc - dc).norm() <= 1e-8 * dc.norm());
    }
  }

  TEST_CASE("speed derivative examples") {
    const auto loc = fixture::symmetric_origin();
    CHECK(sup_abs_coeff(dF_dc(loc.cfg, loc.c_star, InterfaceState::zero(1, 8))) == 0.0);
    const auto d = dF_dc(loc.cfg, loc.c_star, InterfaceState::mode(3, 8, 1, loc.v0));
    for (int i = 0; i < 4; ++i) CHECK(d[i].sin_coeff(1) == Approx(3.0 * loc.v0(i)));
  }

  TEST_CASE("kernel mode is annihilated at the bifurcation speed") {
    for (int m : {1, 2, 5}) {
      const auto loc = fixture::symmetric_origin(m);
      const auto h = InterfaceState::mode(m, 8, 1, loc.v0);
      const auto Lh = apply_jacobian(loc.cfg, loc.c_star, InterfaceState::zero(m, 8), h);
      CHECK(sup_abs_coeff(Lh) <= 1e-14 * loc.v0.cwiseAbs().maxCoeff() * m * m);
    }
  }

  TEST_CASE("rank deficiency at the bifurcation and off it") {
    const auto loc = fixture::symmetric_origin();
    const int N = 16;
    {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(jacobian_dr(loc.cfg, loc.c_star, InterfaceState::zero(1, N)));
      const auto sv = svd.singularValues();
      CHECK(sv(4 * N - 1) <= 1e-13 * sv(0));
      CHECK(sv(4 * N - 2) >= 1e-6 * sv(0));
    }
    {
      const auto sol = fixture::pinned_wave(loc, 0.05, N);
      CHECK(sol.residual_norm <= 1e-11);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(jacobian_dr(sol.cfg, sol.c, sol.state));
      const auto sv = svd.singularValues();
      CHECK(sv(4 * N - 1) >= 1e-6 * sv(0));
    }
  }

  TEST_CASE("half-period shift commutes with the residual") {
    std::mt19937 rng(oracle::kSeed + 3);
    for (int m : {1, 3}) {
      const auto r = oracle::random_state(rng, m, 10, 0.3);
      const double h = std::numbers::pi / m;
      const auto lhs = residual_F(fixture::generic(), 1.1, shift(r, h));
      const auto base = residual_F(fixture::generic(), 1.1, r);
      SeriesQuad rhs;
      for (int i = 0; i < 4; ++i) rhs[i] = shift(base[i], h);
      CHECK(quad_diff(lhs, rhs) <= 1e-14);
    }
    const auto sol = fixture::pinned_wave(fixture::symmetric_origin(), 0.1, 24);
    CHECK(make_solution(sol.cfg, sol.c, shift(sol.state, std::numbers::pi)).residual_norm <= 1e-11);
  }

  TEST_CASE("monitor values") {
    const auto& cfg = fixture::symmetric();
    const auto flat = monitors(cfg, kRoot5, InterfaceState::zero(1, 8));
    CHECK(flat.m1 == 2.0);
    CHECK(flat.m2 == Approx(kRoot5 - 1).epsilon(1e-15));
    CHECK(flat.m2 == Approx(1.2360680).epsilon(1e-7));

    std::mt19937 rng(oracle::kSeed + 4);
    for (int t = 0; t < 3; ++t) {
      const auto r = oracle::random_state(rng, 1, 6, 0.3);
      const auto mon = monitors(cfg, kRoot5, r);
      double m1 = std::min(brute_min_abs(r[1] - r[0], 2.0), brute_min_abs(r[3] - r[2], 2.0));
      double m2 = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 4; ++i) m2 = std::min(m2, brute_min_abs(r[i], cfg[i] - kRoot5));
      CHECK(mon.m1 == Approx(m1).epsilon(1e-10));
      CHECK(mon.m2 == Approx(m2).epsilon(1e-10));
      const auto shifted = monitors(cfg, kRoot5, shift(r, std::numbers::pi));
      CHECK(shifted.m1 == Approx(mon.m1).epsilon(1e-12));
      CHECK(shifted.m2 == Approx(mon.m2).epsilon(1e-12));
    }
    // a crossing of the wave speed gives a vanishing monitor
    const auto crossing = InterfaceState::mode(1, 4, 1, Eigen::Vector4d(0, 2.0, 0, 0));
    CHECK(monitors(cfg, 2.0, crossing).m2 == 0.0);
  }

  TEST_CASE("flatten round trip") {
    std::mt19937 rng(oracle::kSeed + 5);
    const auto r = oracle::random_state(rng, 2, 7, 1.0);
    const auto x = flatten(r);
    CHECK(x.size() == 28);
    CHECK(x(7) == r[1].cos_coeff(1));
    const auto back = unflatten(2, 7, x);
    for (int i = 0; i < 4; ++i) CHECK(sup_abs_coeff(back[i] - r[i]) == 0.0);
  }

  TEST_CASE("wave solution JSON round trip") {
    const auto sol = fixture::pinned_wave(fixture::symmetric_origin(), 0.05, 16);
    const auto j = to_json(sol);
    CHECK(j.at("N") == 16);
    CHECK(j.contains("m1"));
    const auto back = solution_from_json(j);
    CHECK(back.c == sol.c);
    CHECK(back.residual_norm == sol.residual_norm);
    for (int i = 0; i < 4; ++i) CHECK(sup_abs_coeff(back.state[i] - sol.state[i]) == 0.0);
  }
}
