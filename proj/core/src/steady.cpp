#include "layerwave/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "layerwave/error.hpp"

namespace layerwave {

InterfaceState InterfaceState::zero(int fold, int count) {
  InterfaceState r;
  for (auto& f : r.comp) f = TrigSeries(fold, count, Parity::even_cosine);
  return r;
}

InterfaceState InterfaceState::mode(int fold, int count, int harmonic,
                                    const Eigen::Vector4d& amplitude) {
  InterfaceState r;
  for (int i = 0; i < kInterfaces; ++i) {
    r.comp[i] = TrigSeries::cosine(fold, count, harmonic, amplitude(i));
  }
  return r;
}

void InterfaceState::check_invariants() const {
  for (const auto& f : comp) {
    f.check_invariants();
    if (f.parity() != Parity::even_cosine) {
      throw Error(ErrorCode::invalid_argument, "interface profiles must be even cosine series");
    }
    if (f.fold() != fold()) throw Error(ErrorCode::fold_mismatch, "interface folds differ");
    if (f.count() != count()) {
      throw Error(ErrorCode::invalid_argument, "interface truncations differ");
    }
  }
}

Eigen::VectorXd flatten(const InterfaceState& r) {
  const int n = r.count();
  Eigen::VectorXd x(kInterfaces * n);
  for (int i = 0; i < kInterfaces; ++i) {
    for (int j = 1; j <= n; ++j) x(i * n + j - 1) = r[i].cos_coeff(j);
  }
  return x;
}

InterfaceState unflatten(int fold, int count, const Eigen::VectorXd& x) {
  if (x.size() != kInterfaces * count) {
    throw Error(ErrorCode::invalid_argument, "coefficient vector has the wrong length");
  }
  InterfaceState r = InterfaceState::zero(fold, count);
  for (int i = 0; i < kInterfaces; ++i) {
    for (int j = 1; j <= count; ++j) r[i].set_cos(j, x(i * count + j - 1));
  }
  return r;
}

Eigen::VectorXd flatten_sine(const SeriesQuad& f) {
  const int n = f[0].count();
  Eigen::VectorXd x(kInterfaces * n);
  for (int i = 0; i < kInterfaces; ++i) {
    for (int j = 1; j <= n; ++j) x(i * n + j - 1) = f[i].sin_coeff(j);
  }
  return x;
}

InterfaceState operator+(const InterfaceState& x, const InterfaceState& y) {
  InterfaceState out = x;
  for (int i = 0; i < kInterfaces; ++i) out[i] += y[i];
  return out;
}

InterfaceState operator-(const InterfaceState& x, const InterfaceState& y) {
  InterfaceState out = x;
  for (int i = 0; i < kInterfaces; ++i) out[i] -= y[i];
  return out;
}

InterfaceState operator*(double k, const InterfaceState& x) {
  InterfaceState out = x;
  for (auto& f : out.comp) f *= k;
  return out;
}

InterfaceState shift(const InterfaceState& r, double h) {
  InterfaceState out;
  for (int i = 0; i < kInterfaces; ++i) out[i] = shift(r[i], h);
  return out;
}

InterfaceState resized(const InterfaceState& r, int count) {
  InterfaceState out;
  for (int i = 0; i < kInterfaces; ++i) out[i] = resized(r[i], count);
  return out;
}

double norm(const InterfaceState& r, const NormParams& p) { return tail_norm(r, p, 1); }

double tail_norm(const InterfaceState& r, const NormParams& p, int first) {
  double out = 0.0;
  for (const auto& f : r.comp) out = std::max(out, tail_norm(f, p, first));
  return out;
}

double sup_abs_coeff(const SeriesQuad& f) {
  double out = 0.0;
  for (const auto& s : f) out = std::max(out, sup_abs_coeff(s));
  return out;
}

TrigSeries net_charge(const SeriesQuad& r) {
  TrigSeries d = r[1] - r[0];
  d -= r[3];
  d += r[2];
  return d;
}

SeriesQuad residual_F(const LayerConfig& cfg, double c, const InterfaceState& r) {
  const TrigSeries field = antideriv(net_charge(r.comp));
  SeriesQuad out;
  for (int i = 0; i < kInterfaces; ++i) {
    // (r + a - c) r' = d/dx[(a - c) r + r^2 / 2]
    TrigSeries flux = (cfg[i] - c) * r[i];
    flux += 0.5 * multiply(r[i], r[i]);
    out[i] = deriv(flux);
    out[i] -= kSpeciesSign[i] * field;
  }
  return out;
}

SeriesQuad apply_jacobian(const LayerConfig& cfg, double c, const InterfaceState& r,
                          const InterfaceState& h) {
  const TrigSeries field = antideriv(net_charge(h.comp));
  SeriesQuad out;
  for (int i = 0; i < kInterfaces; ++i) {
    TrigSeries flux = (cfg[i] - c) * h[i];
    flux += multiply(r[i], h[i]);
    out[i] = deriv(flux);
    out[i] -= kSpeciesSign[i] * field;
  }
  return out;
}

Eigen::MatrixXd jacobian_dr(const LayerConfig& cfg, double c, const InterfaceState& r) {
  const int n = r.count();
  const double m = r.fold();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(kInterfaces * n, kInterfaces * n);

  for (int i = 0; i < kInterfaces; ++i) {
    const auto rho = r[i].cos_coeffs();
    auto coeff = [&](int k) { return (k >= 1 && k <= n) ? rho[k - 1] : 0.0; };
    const double shift_speed = cfg[i] - c;
    // Row l, column j: d/dx of (a - c + r) cos(j m x) projected on sin(l m x).
    for (int l = 1; l <= n; ++l) {
      const double dl = -l * m;
      for (int j = 1; j <= n; ++j) {
        double conv = 0.5 * (coeff(l - j) + coeff(l + j) + coeff(j - l));
        if (l == j) conv += shift_speed;
        J(i * n + l - 1, i * n + j - 1) = dl * conv;
      }
    }
    for (int k = 0; k < kInterfaces; ++k) {
      const double w = -kSpeciesSign[i] * kChargeWeight[k];
      for (int j = 1; j <= n; ++j) J(i * n + j - 1, k * n + j - 1) += w / (j * m);
    }
  }
  return J;
}

SeriesQuad dF_dc(const LayerConfig& cfg, double c, const InterfaceState& r) {
  (void)cfg;
  (void)c;
  SeriesQuad out;
  for (int i = 0; i < kInterfaces; ++i) out[i] = -deriv(r[i]);
  return out;
}

namespace {

// min over one period of |f(x) + offset|.
double min_abs(const TrigSeries& f, double offset, int points) {
  if (sup_abs_coeff(f) == 0.0) return std::abs(offset);
  const std::vector<double> v = [&] {
    auto s = sample(f, points);
    for (auto& x : s) x += offset;
    return s;
  }();
  const double h = 2.0 * std::numbers::pi / f.fold() / points;

  double best = std::numeric_limits<double>::infinity();
  for (int p = 0; p < points; ++p) {
    const double prev = v[(p + points - 1) % points];
    const double cur = v[p];
    const double next = v[(p + 1) % points];
    best = std::min(best, std::abs(cur));
    if (cur == 0.0 || (cur > 0.0) != (next > 0.0)) return 0.0;
    if (std::abs(cur) > std::abs(prev) || std::abs(cur) > std::abs(next)) continue;

    // Interior minimum of |g| with constant sign: refine the extremum of g.
    double x = p * h;
    for (int it = 0; it < 6; ++it) {
      const double g1 = evaluate_deriv(f, x);
      const double g2 = evaluate_second_deriv(f, x);
      if (g2 == 0.0) break;
      const double step = g1 / g2;
      if (!std::isfinite(step) || std::abs(step) > h) break;
      x -= step;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) break;
    }
    const double val = evaluate(f, x) + offset;
    if ((val > 0.0) != (cur > 0.0)) return 0.0;
    best = std::min(best, std::abs(val));
  }
  return best;
}

}  // namespace

Monitors monitors(const LayerConfig& cfg, double c, const InterfaceState& r) {
  const int points = 16 * std::max(r.count(), 1);
  Monitors out{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (int lower : {0, 2}) {
    const TrigSeries gap = r[lower + 1] - r[lower];
    out.m1 = std::min(out.m1, min_abs(gap, cfg[lower + 1] - cfg[lower], points));
  }
  for (int i = 0; i < kInterfaces; ++i) {
    out.m2 = std::min(out.m2, min_abs(r[i], cfg[i] - c, points));
  }
  return out;
}

WaveSolution make_solution(const LayerConfig& cfg, double c, const InterfaceState& r) {
  return WaveSolution{cfg, c, r, sup_abs_coeff(residual_F(cfg, c, r)), monitors(cfg, c, r)};
}

}  // namespace layerwave
