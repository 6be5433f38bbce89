#include <doctest.h>

#include <cmath>

#include <layerwave/error.hpp>
#include <layerwave/io.hpp>
#include <layerwave/pencil.hpp>

#include "oracles.hpp"

using namespace layerwave;
using doctest::Approx;

namespace {

const LayerConfig kSym = classify_config({-1, 1, -1, 1});
const LayerConfig kSucc = classify_config({0, 1, 1, 2});
const LayerConfig kGen = classify_config({0, 1, 2.5, 3.5});
const double kRoot5 = std::sqrt(5.0);

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_SUITE("pencil") {
  TEST_CASE("configuration classification") {
    CHECK(classify_config({0, 1, 2, 3}).regime() == Regime::generic);
    CHECK(kSym.regime() == Regime::symmetric);
    CHECK(kSucc.regime() == Regime::successive);
    CHECK(classify_config({1, 2, 0, 1}).regime() == Regime::successive);
    CHECK(code_of([] { (void)classify_config({0, 1, 2, 4}); }) == ErrorCode::invalid_config);
    CHECK(code_of([] { (void)classify_config({1, 0, 3, 2}); }) == ErrorCode::invalid_config);
    try {
      (void)classify_config({0, 1, 2, 4});
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("equal-deltas") != std::string::npos);
    }
  }

  TEST_CASE("pencil entries") {
    const auto cfg = classify_config({0, 1, 2, 3});
    const auto M = assemble_M(1, cfg, -1.0).entries;
    CHECK(M.diagonal() == Eigen::Vector4d(0, 3, 2, 5));
    CHECK((M - oracle::pencil_by_hand(1, cfg.a(), -1.0)).norm() == 0.0);
    std::mt19937 rng(oracle::kSeed);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int t = 0; t < 10; ++t) {
      const auto a = oracle::random_generic(rng);
      const int j = 1 + t;
      const double c = u(rng);
      const auto P = pencil_matrix(j, classify_config(a), c);
      CHECK(P(0, 1) == 1.0);
      CHECK(P(1, 0) == -1.0);
      CHECK((P - oracle::pencil_by_hand(j, a, c)).norm() <= 1e-12 * P.norm());
    }
    CHECK(std::abs(pencil_matrix(1, kSym, kRoot5).determinant()) < 1e-12);
    CHECK(code_of([&] { (void)assemble_M(0, kSym, 0.0); }) == ErrorCode::invalid_argument);
  }

  TEST_CASE("determinant polynomial") {
    const auto cfg = classify_config({0, 1, 2, 3});
    CHECK(eval_poly(det_poly(1, cfg), 0.0) == Approx(-6.0).epsilon(1e-14));
    for (int m : {1, 3, 7}) CHECK(det_poly(m, cfg)[4] == Approx(std::pow(m, 8)));

    std::mt19937 rng(oracle::kSeed + 1);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int t = 0; t < 20; ++t) {
      const auto a = oracle::random_generic(rng);
      const double c = u(rng);
      const int m = 1 + t % 5;
      const double ref = oracle::cofactor_det(oracle::pencil_by_hand(m, a, c));
      const double got = eval_poly(det_poly(m, classify_config(a)), c);
      CHECK(std::abs(got - ref) <= 1e-10 * std::abs(ref));
    }
  }

  TEST_CASE("symmetric speed set") {
    const auto s = bifurcation_speeds(1, kSym);
    REQUIRE(s.speeds.size() == 4);
    CHECK(s.speeds[0].value.real() == Approx(-kRoot5));
    CHECK(s.speeds[1].value.real() == -1.0);
    CHECK(s.speeds[2].value.real() == 1.0);
    CHECK(s.speeds[3].value.real() == Approx(kRoot5));
    const auto adm = s.admissible();
    REQUIRE(adm.size() == 2);
    CHECK(adm[1] == Approx(2.2360680).epsilon(1e-7));
    CHECK(s.closed_form_discrepancy < 1e-10);
  }

  TEST_CASE("successive speed set") {
    const auto s = bifurcation_speeds(1, kSucc);
    REQUIRE(s.speeds.size() == 3);
    CHECK(s.speeds[0].value.real() == Approx(1 - std::sqrt(3.0)));
    CHECK(s.speeds[1].value.real() == 1.0);
    CHECK(s.speeds[1].multiplicity == 2);
    CHECK_FALSE(s.speeds[1].admissible);
    CHECK(s.speeds[2].value.real() == Approx(1 + std::sqrt(3.0)));
    CHECK(s.admissible().size() == 2);
  }

  TEST_CASE("closed forms agree with quartic roots up to m = 64") {
    for (const auto* cfg : {&kSym, &kSucc}) {
      for (int m = 1; m <= 64; ++m) {
        const auto s = bifurcation_speeds(m, *cfg);
        CHECK(s.closed_form_discrepancy <= 1e-10);
        int total = 0;
        for (const auto& r : quartic_roots(det_poly(m, *cfg))) total += r.multiplicity;
        CHECK(total == 4);
      }
    }
  }

  TEST_CASE("closed-form speeds approach the outer levels monotonically") {
    for (const auto& [alpha, beta, width] : {std::tuple{-1.0, 1.0, 2.0}, std::tuple{2.0, 0.0, 1.0}}) {
      double prev_lo = -1e300, prev_hi = 1e300;
      for (int m = 1; m <= 256; ++m) {
        const double lo = closed_form_speed(alpha, beta, width, m, -1);
        const double hi = closed_form_speed(alpha, beta, width, m, +1);
        CHECK(lo > prev_lo);
        CHECK(hi < prev_hi);
        CHECK(lo < std::min(alpha, beta));
        CHECK(hi > std::max(alpha, beta));
        prev_lo = lo;
        prev_hi = hi;
      }
    }
  }

  TEST_CASE("generic roots converge to the levels") {
    std::vector<double> ms, gaps;
    for (int m : {8, 16, 32, 64, 128, 256}) {
      const auto s = bifurcation_speeds(m, kGen);
      REQUIRE(s.admissible().size() == 4);
      double worst = 0.0;
      for (double c : s.admissible()) worst = std::max(worst, std::abs(c - kGen[nearest_component(kGen, c)]));
      ms.push_back(m);
      gaps.push_back(worst);
    }
    CHECK(oracle::loglog_slope(ms, gaps) == Approx(-2.0).epsilon(0.05));
  }

  TEST_CASE("kernel and cokernel vectors") {
    const auto v = kernel_vector(1, kSym, kRoot5);
    const double p = 1.0 / (1.0 + kRoot5), q = 1.0 / (kRoot5 - 1.0);
    CHECK(v(0) == Approx(-p));
    CHECK(v(1) == Approx(-q));
    CHECK(v(2) == Approx(p));
    CHECK(v(3) == Approx(q));
    CHECK(v(0) == Approx(-0.309017).epsilon(1e-6));
    CHECK(v(1) == Approx(-0.809017).epsilon(1e-6));
    const auto w = cokernel_vector(1, kSym, kRoot5);
    CHECK(w(0) == Approx(-p));
    CHECK(w(1) == Approx(q));
    CHECK(w(2) == Approx(p));
    CHECK(w(3) == Approx(-q));

    const auto M = pencil_matrix(1, kSym, kRoot5);
    std::mt19937 rng(oracle::kSeed + 2);
    std::normal_distribution<double> g;
    for (int t = 0; t < 20; ++t) {
      const Eigen::Vector4d y(g(rng), g(rng), g(rng), g(rng));
      CHECK(std::abs(w.dot(M * y)) <= 1e-12 * M.norm() * w.norm() * y.norm());
    }
    CHECK(code_of([] { (void)kernel_vector(1, kSym, 1.0); }) == ErrorCode::degenerate_speed);
    CHECK(code_of([] { (void)cokernel_vector(1, kSym, -1.0); }) == ErrorCode::degenerate_speed);
  }

  TEST_CASE("kernel at random admissible speeds") {
    std::mt19937 rng(oracle::kSeed + 3);
    int tested = 0;
    while (tested < 10) {
      const auto cfg = classify_config(oracle::random_generic(rng));
      const int m = min_admissible_mode(cfg, 64);
      for (double c : bifurcation_speeds(m, cfg).admissible()) {
        const auto M = pencil_matrix(m, cfg, c);
        const auto v = kernel_vector(m, cfg, c);
        const auto w = cokernel_vector(m, cfg, c);
        CHECK((M * v).norm() <= 1e-12 * M.norm() * v.norm());
        CHECK((M.transpose() * w).norm() <= 1e-12 * M.norm() * w.norm());
        Eigen::JacobiSVD<Eigen::Matrix4d> svd(M);
        const auto sv = svd.singularValues();
        CHECK(sv(3) <= 1e-12 * sv(0));
        CHECK(sv(2) > 1e-6 * sv(0));
        CHECK(oracle::angle(v, oracle::null_vector(M)) <= 1e-8);
        CHECK(oracle::angle(w, oracle::null_vector(M.transpose())) <= 1e-8);
        CHECK_FALSE(transversality(m, cfg, c).suspect);
      }
      ++tested;
    }
  }

  TEST_CASE("transversality") {
    const double hand = 2.0 / (6.0 + 2.0 * kRoot5) - 2.0 / (6.0 - 2.0 * kRoot5);
    const auto t = transversality(1, kSym, kRoot5);
    CHECK(t.value == Approx(hand).epsilon(1e-14));
    CHECK(t.value == Approx(-kRoot5 / 2).epsilon(1e-12));
    CHECK_FALSE(t.suspect);
    for (int m = 1; m <= 64; ++m) {
      const auto adm = bifurcation_speeds(m, kSym).admissible();
      const double lo = transversality(m, kSym, adm[0]).value;
      const double hi = transversality(m, kSym, adm[1]).value;
      CHECK(lo * hi < 0.0);
      CHECK(std::abs(lo) > 1e-10);
    }
    const auto kd = kernel_data(3, kGen, bifurcation_speeds(3, kGen).admissible().front());
    CHECK(kd.w0_tilde(0) == Approx(1.0 / std::pow(kGen[0] - bifurcation_speeds(3, kGen).admissible().front(), 2)));
  }

  TEST_CASE("minimal admissible mode") {
    const int m = min_admissible_mode(kGen, 64);
    CHECK(m == 2);
    const auto below = quartic_roots(det_poly(m - 1, kGen));
    bool all_real = true;
    for (const auto& r : below) all_real = all_real && r.value.imag() == 0.0 && r.multiplicity == 1;
    CHECK_FALSE(all_real);
    CHECK(bifurcation_speeds(m, kGen).admissible().size() == 4);
    CHECK(min_admissible_mode(kSym, 1) == 1);
    CHECK(code_of([] { (void)min_admissible_mode(kGen, 0); }) == ErrorCode::no_admissible_mode);
  }

  TEST_CASE("speed set JSON") {
    const auto j = to_json(bifurcation_speeds(1, kSym));
    CHECK(j.at("m") == 1);
    CHECK(j.at("regime") == "symmetric");
    CHECK(j.at("speeds").size() == 4);
    CHECK(j.at("speeds")[3].at("admissible") == true);
    CHECK(j.at("speeds")[3].at("provenance") == "closed-form");
  }
}
