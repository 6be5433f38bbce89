#include "layerwave/eulerpoisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "layerwave/error.hpp"

namespace layerwave {

double symmetric_half_width(const LayerConfig& cfg) {
  const double a = cfg[1];
  const bool ok = cfg.regime() == Regime::symmetric && a > 0.0 &&
                  std::abs(cfg[0] + a) <= 1e-12 && std::abs(cfg[3] - a) <= 1e-12;
  if (!ok) {
    throw Error(ErrorCode::regime_mismatch,
                "the fluid correspondence needs a configuration (-a, a, -a, a) with a > 0");
  }
  return a;
}

EPState map_to_ep(const LayerConfig& cfg, double c, const InterfaceState& r) {
  const double a = symmetric_half_width(cfg);
  auto density = [&](int lower) {
    return OffsetSeries{a, (0.5 * (r[lower + 1] - r[lower])).with_parity(Parity::full)};
  };
  auto velocity = [&](int lower) {
    return OffsetSeries{0.0, (0.5 * (r[lower + 1] + r[lower])).with_parity(Parity::full)};
  };
  return EPState{a, c, density(0), density(2), velocity(0), velocity(2)};
}

EPState map_to_ep(const WaveSolution& sol) { return map_to_ep(sol.cfg, sol.c, sol.state); }

InterfaceState map_from_ep(const EPState& ep) {
  InterfaceState r;
  auto fill = [&](int lower, const OffsetSeries& rho, const OffsetSeries& u) {
    r[lower + 1] = (u.wave + rho.wave).with_parity(Parity::even_cosine);
    r[lower] = (u.wave - rho.wave).with_parity(Parity::even_cosine);
  };
  fill(0, ep.rho_plus, ep.u_plus);
  fill(2, ep.rho_minus, ep.u_minus);
  return r;
}

namespace {

constexpr auto kExtend = ProductRange::extend;

TrigSeries widen(const TrigSeries& f, int count) { return resized(f, count); }

}  // namespace

EPResidual ep_residual(const EPState& s) {
  const TrigSeries charge = s.rho_plus.wave - s.rho_minus.wave;
  EPResidual out;
  const std::array<const OffsetSeries*, 2> rho{&s.rho_plus, &s.rho_minus};
  const std::array<const OffsetSeries*, 2> u{&s.u_plus, &s.u_minus};
  for (int k = 0; k < 2; ++k) {
    const OffsetSeries flux = multiply(*rho[k], *u[k], kExtend);
    const OffsetSeries flux_u = multiply(flux, *u[k], kExtend);
    const OffsetSeries rho2 = multiply(*rho[k], *rho[k], kExtend);
    const OffsetSeries rho3 = multiply(rho2, *rho[k], kExtend);
    const TrigSeries field = antideriv(charge);
    const OffsetSeries force = multiply(*rho[k], OffsetSeries{0.0, field}, kExtend);
    const int n = rho3.wave.count();

    TrigSeries cont = widen(-s.c * deriv(rho[k]->wave), n);
    cont += widen(deriv(flux.wave), n);

    TrigSeries mom = widen(-s.c * deriv(flux.wave), n);
    mom += widen(deriv(flux_u.wave), n);
    mom += (1.0 / 3.0) * widen(deriv(rho3.wave), n);
    const double sign = k == 0 ? -2.0 : 2.0;
    mom += sign * widen(force.wave, n);
    out.continuity[k] = cont;
    out.momentum[k] = mom;
    out.momentum_mean[k] = sign * force.mean;
  }
  out.continuity_sup = std::max(sup_abs_coeff(out.continuity[0]), sup_abs_coeff(out.continuity[1]));
  out.momentum_sup = std::max({sup_abs_coeff(out.momentum[0]), sup_abs_coeff(out.momentum[1]),
                               std::abs(out.momentum_mean[0]), std::abs(out.momentum_mean[1])});
  return out;
}

double min_density(const EPState& s, int points) {
  double lo = std::numeric_limits<double>::infinity();
  for (const OffsetSeries* rho : {&s.rho_plus, &s.rho_minus}) {
    for (double v : sample(rho->wave, points)) lo = std::min(lo, rho->mean + v);
  }
  return lo;
}

EPSpeeds ep_speeds(double a, int m) {
  if (!(a > 0.0)) throw Error(ErrorCode::invalid_argument, "half-width must be positive");
  const LayerConfig cfg = classify_config({-a, a, -a, a});
  const auto admissible = bifurcation_speeds(m, cfg).admissible();
  if (admissible.size() != 2) {
    throw Error(ErrorCode::degenerate_speed, "expected two admissible speeds");
  }
  const double m2 = static_cast<double>(m) * m;
  EPSpeeds out{admissible[0], admissible[1], a * std::sqrt(1.0 + 2.0 / (a * m2)),
               a * std::sqrt(1.0 + 4.0 / (a * m2)), 0};
  // Compare against the quartic roots directly rather than the closed form
  // used inside bifurcation_speeds.
  double root = -std::numeric_limits<double>::infinity();
  for (const auto& rec : quartic_roots(det_poly(m, cfg))) {
    if (rec.value.imag() == 0.0) root = std::max(root, rec.value.real());
  }
  out.matching_factor = std::abs(root - out.factor_four_formula) <
                                std::abs(root - out.factor_two_formula)
                            ? 4
                            : 2;
  return out;
}

}  // namespace layerwave
