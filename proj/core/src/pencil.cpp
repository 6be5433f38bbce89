#include "layerwave/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "layerwave/error.hpp"

namespace layerwave {

namespace {

constexpr double kCompareTol = 1e-12;
constexpr double kAdmissibleRel = 1e-10;
constexpr double kRealRel = 1e-9;
constexpr double kMergeRel = 1e-6;

bool same(double x, double y) { return std::abs(x - y) <= kCompareTol; }

using Poly = std::array<double, 5>;

std::complex<double> horner(const Poly& p, std::complex<double> z) {
  std::complex<double> acc = p[4];
  for (int i = 3; i >= 0; --i) acc = acc * z + p[i];
  return acc;
}

std::complex<double> horner_d1(const Poly& p, std::complex<double> z) {
  std::complex<double> acc = 4.0 * p[4];
  for (int i = 3; i >= 1; --i) acc = acc * z + static_cast<double>(i) * p[i];
  return acc;
}

std::complex<double> horner_d2(const Poly& p, std::complex<double> z) {
  return 12.0 * p[4] * z * z + 6.0 * p[3] * z + 2.0 * p[2];
}

// Newton on f with derivative df; stops once |f| stops decreasing.
template <class F, class DF>
std::complex<double> polish(std::complex<double> z, F f, DF df) {
  double best = std::abs(f(z));
  for (int it = 0; it < 8 && best > 0.0; ++it) {
    const std::complex<double> d = df(z);
    if (std::abs(d) == 0.0) break;
    const std::complex<double> next = z - f(z) / d;
    const double val = std::abs(f(next));
    if (!(val < best)) break;
    z = next;
    best = val;
  }
  return z;
}

bool near_component(const LayerConfig& cfg, double c, double rel) {
  const double tol = rel * (1.0 + cfg.scale());
  return std::any_of(cfg.a().begin(), cfg.a().end(),
                     [&](double ai) { return std::abs(ai - c) <= tol; });
}

void sort_records(std::vector<SpeedRecord>& recs) {
  std::sort(recs.begin(), recs.end(), [](const SpeedRecord& x, const SpeedRecord& y) {
    if (x.value.real() != y.value.real()) return x.value.real() < y.value.real();
    return x.value.imag() < y.value.imag();
  });
}

}  // namespace

const char* to_string(Regime r) {
  switch (r) {
    case Regime::generic: return "generic";
    case Regime::symmetric: return "symmetric";
    case Regime::successive: return "successive";
  }
  return "generic";
}

const char* to_string(Provenance p) {
  return p == Provenance::closed_form ? "closed-form" : "quartic-root";
}

double LayerConfig::scale() const {
  double s = 0.0;
  for (double v : a_) s = std::max(s, std::abs(v));
  return s;
}

LayerConfig classify_config(const std::array<double, 4>& a) {
  for (double v : a) {
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_config, "non-finite interface velocity");
  }
  const double plus_width = a[1] - a[0];
  const double minus_width = a[3] - a[2];
  if (!same(plus_width, minus_width)) {
    throw Error(ErrorCode::invalid_config,
                "layer widths differ (equal-deltas constraint): a+2 - a+1 = " +
                    std::to_string(plus_width) + ", a-2 - a-1 = " + std::to_string(minus_width));
  }
  if (plus_width <= kCompareTol) {
    throw Error(ErrorCode::invalid_config, "layer width must be positive");
  }
  // a+1 = a-1 forces a+2 = a-2 through the common width, and the two
  // successive coincidences are mutually exclusive.
  if (same(a[0], a[2])) return LayerConfig(a, Regime::symmetric);
  if (same(a[1], a[2]) || same(a[0], a[3])) return LayerConfig(a, Regime::successive);
  return LayerConfig(a, Regime::generic);
}

Eigen::Matrix4d pencil_matrix(int j, const LayerConfig& cfg, double c) {
  const double j2 = static_cast<double>(j) * j;
  Eigen::Matrix4d M;
  // clang-format off
  M <<  0,  1,  1, -1,
       -1,  0,  1, -1,
        1, -1,  0,  1,
        1, -1, -1,  0;
  // clang-format on
  for (int i = 0; i < kInterfaces; ++i) M(i, i) = j2 * (cfg[i] - c) + kLevelSign[i];
  return M;
}

ModePencil assemble_M(int j, const LayerConfig& cfg, double c) {
  if (j < 1) throw Error(ErrorCode::invalid_argument, "mode index must be positive");
  return ModePencil{j, cfg, c, pencil_matrix(j, cfg, c)};
}

std::array<double, 5> det_poly(int m, const LayerConfig& cfg) {
  // Product of the linear factors (a_i - c) over a subset of interfaces.
  auto product_of = [&](int skip) {
    Poly p{1.0, 0.0, 0.0, 0.0, 0.0};
    int deg = 0;
    for (int i = 0; i < kInterfaces; ++i) {
      if (i == skip) continue;
      Poly next{};
      for (int d = 0; d <= deg; ++d) {
        next[d] += cfg[i] * p[d];
        next[d + 1] -= p[d];
      }
      p = next;
      ++deg;
    }
    return p;
  };
  const double m2 = static_cast<double>(m) * m;
  const double m6 = m2 * m2 * m2;
  const double m8 = m6 * m2;
  Poly out{};
  const Poly full = product_of(-1);
  for (int d = 0; d < 5; ++d) out[d] = m8 * full[d];
  for (int k = 0; k < kInterfaces; ++k) {
    const Poly partial = product_of(k);
    for (int d = 0; d < 4; ++d) out[d] += m6 * kLevelSign[k] * partial[d];
  }
  return out;
}

double eval_poly(const std::array<double, 5>& p, double c) {
  return (((p[4] * c + p[3]) * c + p[2]) * c + p[1]) * c + p[0];
}

std::vector<SpeedRecord> quartic_roots(const std::array<double, 5>& coeffs) {
  if (coeffs[4] == 0.0) throw Error(ErrorCode::invalid_argument, "leading coefficient vanishes");
  Poly p;
  for (int d = 0; d < 5; ++d) p[d] = coeffs[d] / coeffs[4];

  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  for (int i = 1; i < 4; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < 4; ++i) companion(i, 3) = -p[i];
  const Eigen::Vector4cd eig = companion.eigenvalues();

  std::vector<std::complex<double>> raw(eig.data(), eig.data() + 4);
  std::sort(raw.begin(), raw.end(), [](auto x, auto y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });

  auto f = [&](std::complex<double> z) { return horner(p, z); };
  auto df = [&](std::complex<double> z) { return horner_d1(p, z); };
  auto d2f = [&](std::complex<double> z) { return horner_d2(p, z); };

  std::vector<bool> used(4, false);
  std::vector<SpeedRecord> out;
  for (int i = 0; i < 4; ++i) {
    if (used[i]) continue;
    used[i] = true;
    SpeedRecord rec;
    rec.value = raw[i];
    // A double root splits into a pair at distance ~sqrt(eps); the pair mean
    // is well conditioned and is a simple root of the derivative.
    for (int k = i + 1; k < 4; ++k) {
      if (used[k]) continue;
      const double tol = kMergeRel * (1.0 + std::abs(raw[i]));
      if (std::abs(raw[k] - raw[i]) <= tol) {
        used[k] = true;
        rec.value = 0.5 * (raw[i] + raw[k]);
        rec.multiplicity = 2;
        break;
      }
    }
    rec.value = rec.multiplicity == 2 ? polish(rec.value, df, d2f) : polish(rec.value, f, df);
    if (std::abs(rec.value.imag()) <= kRealRel * (1.0 + std::abs(rec.value.real()))) {
      rec.value = {rec.value.real(), 0.0};
    }
    out.push_back(rec);
  }
  sort_records(out);
  return out;
}

double closed_form_speed(double alpha, double beta, double width, int m, int sign) {
  const double m2 = static_cast<double>(m) * m;
  const double gap = beta - alpha;
  return 0.5 * (alpha + beta) + 0.5 * sign * std::sqrt(gap * gap + 8.0 * width / m2);
}

std::vector<double> SpeedSet::admissible() const {
  std::vector<double> out;
  for (const auto& s : speeds) {
    if (s.admissible) out.push_back(s.value.real());
  }
  return out;
}

SpeedSet bifurcation_speeds(int m, const LayerConfig& cfg) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "mode must be positive");
  SpeedSet set{m, cfg.regime(), {}};
  const double width = cfg.width();

  auto closed = [](double v, int mult, bool adm) {
    return SpeedRecord{{v, 0.0}, mult, adm, Provenance::closed_form};
  };

  switch (cfg.regime()) {
    case Regime::symmetric: {
      const double a1 = cfg[0];
      const double a2 = cfg[1];
      set.speeds = {closed(a1, 1, false), closed(a2, 1, false),
                    closed(closed_form_speed(a1, a2, width, m, -1), 1, true),
                    closed(closed_form_speed(a1, a2, width, m, +1), 1, true)};
      break;
    }
    case Regime::successive: {
      // The shared level is the double root; the two remaining levels play
      // the role of (alpha, beta).
      const bool upper_ion_meets_lower_electron = same(cfg[1], cfg[2]);
      const double shared = upper_ion_meets_lower_electron ? cfg[1] : cfg[0];
      const double alpha = upper_ion_meets_lower_electron ? cfg[3] : cfg[2];
      const double beta = upper_ion_meets_lower_electron ? cfg[0] : cfg[1];
      set.speeds = {closed(shared, 2, false),
                    closed(closed_form_speed(alpha, beta, width, m, -1), 1, true),
                    closed(closed_form_speed(alpha, beta, width, m, +1), 1, true)};
      break;
    }
    case Regime::generic: {
      set.speeds = quartic_roots(det_poly(m, cfg));
      for (auto& s : set.speeds) {
        s.admissible = s.value.imag() == 0.0 && s.multiplicity == 1 &&
                       !near_component(cfg, s.value.real(), kAdmissibleRel);
      }
      break;
    }
  }
  sort_records(set.speeds);
  if (cfg.regime() != Regime::generic) {
    const auto numeric = quartic_roots(det_poly(m, cfg));
    for (const auto& s : set.speeds) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& r : numeric) best = std::min(best, std::abs(r.value - s.value));
      set.closed_form_discrepancy = std::max(set.closed_form_discrepancy, best);
    }
  }
  return set;
}

Eigen::Vector4d kernel_vector(int m, const LayerConfig& cfg, double c_star) {
  (void)m;
  if (near_component(cfg, c_star, kAdmissibleRel)) {
    throw Error(ErrorCode::degenerate_speed, "speed coincides with an interface velocity");
  }
  Eigen::Vector4d v;
  for (int i = 0; i < kInterfaces; ++i) v(i) = kSpeciesSign[i] / (cfg[i] - c_star);
  return v;
}

Eigen::Vector4d cokernel_vector(int m, const LayerConfig& cfg, double c_star) {
  (void)m;
  if (near_component(cfg, c_star, kAdmissibleRel)) {
    throw Error(ErrorCode::degenerate_speed, "speed coincides with an interface velocity");
  }
  Eigen::Vector4d w;
  for (int i = 0; i < kInterfaces; ++i) {
    w(i) = -kSpeciesSign[i] * kLevelSign[i] / (cfg[i] - c_star);
  }
  return w;
}

Eigen::Vector4d squared_reciprocal(const LayerConfig& cfg, double c_star) {
  Eigen::Vector4d w;
  for (int i = 0; i < kInterfaces; ++i) {
    const double d = cfg[i] - c_star;
    w(i) = 1.0 / (d * d);
  }
  return w;
}

Transversality transversality(int m, const LayerConfig& cfg, double c_star) {
  if (near_component(cfg, c_star, kAdmissibleRel)) {
    throw Error(ErrorCode::degenerate_speed, "speed coincides with an interface velocity");
  }
  double acc = 0.0;
  for (int i = 0; i < kInterfaces; ++i) {
    const double d = cfg[i] - c_star;
    acc -= kLevelSign[i] / (d * d);
  }
  const double value = m * acc;
  return {value, std::abs(value) < 1e-10};
}

KernelData kernel_data(int m, const LayerConfig& cfg, double c_star) {
  return KernelData{kernel_vector(m, cfg, c_star), cokernel_vector(m, cfg, c_star),
                    squared_reciprocal(cfg, c_star), transversality(m, cfg, c_star).value};
}

int min_admissible_mode(const LayerConfig& cfg, int cap) {
  if (cap < 1) {
    throw Error(ErrorCode::no_admissible_mode, "empty mode scan (cap < 1)");
  }
  if (cfg.regime() != Regime::generic) return 1;
  const double sep = 1e-8 * (1.0 + cfg.scale());
  for (int m = 1; m <= cap; ++m) {
    const auto roots = quartic_roots(det_poly(m, cfg));
    if (roots.size() != 4) continue;
    bool ok = true;
    for (std::size_t i = 0; i < roots.size() && ok; ++i) {
      const double c = roots[i].value.real();
      ok = roots[i].value.imag() == 0.0 &&
           std::all_of(cfg.a().begin(), cfg.a().end(),
                       [&](double ai) { return std::abs(ai - c) > sep; });
      if (ok && i > 0) ok = c - roots[i - 1].value.real() > sep;
    }
    if (ok) return m;
  }
  throw Error(ErrorCode::no_admissible_mode,
              "no mode m <= " + std::to_string(cap) + " has four admissible speeds");
}

int nearest_component(const LayerConfig& cfg, double c) {
  constexpr std::array<int, 4> order{0, 2, 1, 3};
  int best = order[0];
  double best_d = std::abs(cfg[best] - c);
  for (int idx : order) {
    const double d = std::abs(cfg[idx] - c);
    if (d < best_d) {
      best = idx;
      best_d = d;
    }
  }
  return best;
}

}  // namespace layerwave
