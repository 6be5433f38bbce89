#include <doctest.h>

#include <cmath>
#include <numbers>

#include <layerwave/error.hpp>
#include <layerwave/io.hpp>
#include <layerwave/spectral.hpp>

#include "oracles.hpp"

using namespace layerwave;
using doctest::Approx;

namespace {

bool all_zero(const TrigSeries& f) { return sup_abs_coeff(f) == 0.0; }

double max_diff(const TrigSeries& f, const TrigSeries& g) { return sup_abs_coeff(f - g); }

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("deriv of basis elements") {
    const auto d = deriv(TrigSeries::cosine(2, 8, 1));
    CHECK(d.parity() == Parity::odd_sine);
    CHECK(d.sin_coeff(1) == -2.0);
    CHECK(all_zero(d - TrigSeries::sine(2, 8, 1, -2.0)));

    const auto e = deriv(TrigSeries::sine(3, 8, 1));
    CHECK(e.parity() == Parity::even_cosine);
    CHECK(e.cos_coeff(1) == 3.0);

    CHECK(all_zero(deriv(TrigSeries(1, 8, Parity::full))));
    CHECK(deriv(TrigSeries(1, 8, Parity::full)).parity() == Parity::full);
  }

  TEST_CASE("antideriv of basis elements") {
    for (int j = 1; j <= 5; ++j) {
      const auto c = antideriv(TrigSeries::cosine(1, 8, j));
      CHECK(c.sin_coeff(j) == Approx(1.0 / j));
      const auto s = antideriv(TrigSeries::sine(1, 8, j));
      CHECK(s.cos_coeff(j) == Approx(-1.0 / j));
      const auto twice = antideriv(antideriv(TrigSeries::cosine(1, 8, j)));
      CHECK(twice.cos_coeff(j) == Approx(-1.0 / (j * j)));
      CHECK(max_diff(twice, inverse_laplacian(TrigSeries::cosine(1, 8, j))) < 1e-16);
    }
  }

  TEST_CASE("deriv undoes antideriv on random series") {
    std::mt19937 rng(oracle::kSeed);
    for (int t = 0; t < 20; ++t) {
      const auto f = oracle::random_series(rng, 1 + t % 3, 16, Parity::full);
      CHECK(max_diff(deriv(antideriv(f)), f) < 1e-15);
      CHECK(max_diff(antideriv(deriv(f)), f) < 1e-15);
    }
  }

  TEST_CASE("multiply trig identities") {
    const int m = 2;
    const auto c1 = TrigSeries::cosine(m, 8, 1);
    const auto p = multiply_with_mean(c1, c1);
    CHECK(p.mean == Approx(0.5));
    CHECK(p.wave.cos_coeff(2) == Approx(0.5));
    CHECK(p.wave.parity() == Parity::even_cosine);

    const auto q = multiply(c1, TrigSeries::cosine(m, 8, 2));
    CHECK(q.cos_coeff(1) == Approx(0.5));
    CHECK(q.cos_coeff(3) == Approx(0.5));
    CHECK(q.cos_coeff(2) == 0.0);

    CHECK(all_zero(multiply(c1, TrigSeries(m, 8, Parity::full))));
    CHECK(multiply(c1, TrigSeries::sine(m, 8, 1)).parity() == Parity::odd_sine);
  }

  TEST_CASE("multiply matches a pointwise product transformed back") {
    std::mt19937 rng(oracle::kSeed + 1);
    const int N = 12;
    const int points = 4 * (2 * N + 1);
    for (int t = 0; t < 10; ++t) {
      const auto f = oracle::random_series(rng, 1, N, Parity::full, 0.9);
      const auto g = oracle::random_series(rng, 1, N, Parity::full, 0.9);
      const auto fs = oracle::direct_samples(f, points);
      const auto gs = oracle::direct_samples(g, points);
      std::vector<double> prod(points);
      for (int p = 0; p < points; ++p) prod[p] = fs[p] * gs[p];
      const auto ref = oracle::dft(prod, 2 * N);

      const auto ext = multiply_with_mean(f, g, ProductRange::extend);
      const auto trunc = multiply(f, g);
      double scale = std::abs(ref.mean);
      for (int j = 0; j < 2 * N; ++j) scale = std::max({scale, std::abs(ref.cos[j]), std::abs(ref.sin[j])});
      double err = std::abs(ext.mean - ref.mean);
      for (int j = 1; j <= 2 * N; ++j) {
        err = std::max(err, std::abs(ext.wave.cos_coeff(j) - ref.cos[j - 1]));
        err = std::max(err, std::abs(ext.wave.sin_coeff(j) - ref.sin[j - 1]));
      }
      for (int j = 1; j <= N; ++j) {
        err = std::max(err, std::abs(trunc.cos_coeff(j) - ref.cos[j - 1]));
        err = std::max(err, std::abs(trunc.sin_coeff(j) - ref.sin[j - 1]));
      }
      CHECK(err / scale <= 1e-12);
    }
  }

  TEST_CASE("fold mismatch is rejected") {
    try {
      (void)multiply(TrigSeries::cosine(1, 4, 1), TrigSeries::cosine(2, 4, 1));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::fold_mismatch);
    }
  }

  TEST_CASE("norm values and properties") {
    CHECK(norm(TrigSeries::cosine(3, 4, 1), {1.0, 0.5}) == Approx(std::exp(0.5)).epsilon(1e-14));
    CHECK(norm(TrigSeries::cosine(3, 4, 1), {1.0, 0.5}) == Approx(1.6487212707).epsilon(1e-10));
    CHECK(norm(TrigSeries(1, 4, Parity::full), {}) == 0.0);

    std::mt19937 rng(oracle::kSeed + 2);
    for (int t = 0; t < 20; ++t) {
      const auto f = oracle::random_series(rng, 1, 10, Parity::full);
      const auto g = oracle::random_series(rng, 1, 10, Parity::full);
      const NormParams p{2.0, 0.1};
      CHECK(norm(2.0 * f, p) == Approx(2.0 * norm(f, p)).epsilon(1e-14));
      CHECK(norm(f + g, p) <= norm(f, p) + norm(g, p) + 1e-14);
      CHECK(norm(f, {2.5, 0.1}) >= norm(f, p));
      CHECK(norm(f, {2.0, 0.3}) >= norm(f, p));
    }
  }

  TEST_CASE("norm uses the reduced index") {
    // harmonic 2 of fold 3 is cos(6x) and carries weight 2^s e^{2 sigma}
    const auto f = TrigSeries::cosine(3, 4, 2);
    CHECK(norm(f, {1.0, 0.5}) == Approx(2.0 * std::exp(1.0)));
  }

  TEST_CASE("shift examples") {
    const int m = 3;
    const double h = std::numbers::pi / m;
    const auto s1 = shift(TrigSeries::cosine(m, 6, 1), h);
    CHECK(s1.parity() == Parity::even_cosine);
    CHECK(s1.cos_coeff(1) == Approx(-1.0));
    CHECK(std::abs(s1.sin_coeff(1)) < 1e-15);
    const auto s2 = shift(TrigSeries::cosine(m, 6, 2), h);
    CHECK(s2.cos_coeff(2) == Approx(1.0));

    std::mt19937 rng(oracle::kSeed + 3);
    const auto f = oracle::random_series(rng, 2, 8, Parity::full);
    CHECK(max_diff(shift(f, 0.0), f) == 0.0);
    CHECK(max_diff(shift(shift(f, 0.37), -0.37), f) < 1e-15);
    CHECK(evaluate(shift(f, 0.37), 0.5) == Approx(evaluate(f, 0.87)).epsilon(1e-13));
  }

  TEST_CASE("samples agree with direct evaluation") {
    std::mt19937 rng(oracle::kSeed + 4);
    const auto f = oracle::random_series(rng, 2, 9, Parity::full);
    const auto fast = sample(f, 64);
    const auto slow = oracle::direct_samples(f, 64);
    for (int p = 0; p < 64; ++p) CHECK(fast[p] == Approx(slow[p]).epsilon(1e-12));
    const double h = 1e-5;
    const double x = 0.3;
    CHECK(evaluate_deriv(f, x) ==
          Approx((evaluate(f, x + h) - evaluate(f, x - h)) / (2 * h)).epsilon(1e-8));
    CHECK(evaluate_second_deriv(f, x) ==
          Approx((evaluate_deriv(f, x + h) - evaluate_deriv(f, x - h)) / (2 * h)).epsilon(1e-7));
  }

  TEST_CASE("invariants are enforced") {
    TrigSeries f(1, 4, Parity::even_cosine);
    f.set_sin(2, 1.0);
    CHECK_THROWS_AS(f.check_invariants(), Error);
    TrigSeries g(1, 4, Parity::full);
    g.set_cos(1, std::nan(""));
    CHECK_FALSE(g.is_finite());
    CHECK_THROWS_AS(g.check_invariants(), Error);
  }

  TEST_CASE("resize pads and truncates") {
    std::mt19937 rng(oracle::kSeed + 5);
    const auto f = oracle::random_series(rng, 1, 8, Parity::even_cosine);
    const auto big = resized(f, 16);
    CHECK(big.count() == 16);
    CHECK(big.cos_coeff(16) == 0.0);
    CHECK(max_diff(resized(big, 8), f) == 0.0);
    CHECK(tail_norm(big, {}, 9) == 0.0);
  }

  TEST_CASE("series JSON round trip") {
    std::mt19937 rng(oracle::kSeed + 6);
    const auto f = oracle::random_series(rng, 3, 7, Parity::odd_sine);
    const auto j = to_json(f);
    CHECK(j.at("fold") == 3);
    CHECK(j.at("parity") == "odd-sine");
    const auto g = series_from_json(j);
    CHECK(g.parity() == f.parity());
    CHECK(max_diff(f, g) == 0.0);
    CHECK_THROWS_AS(series_from_json(nlohmann::json{{"fold", 1}}), Error);
  }
}
