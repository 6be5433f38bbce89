#include "layerwave/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "layerwave/error.hpp"

namespace layerwave {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_config: return "invalid-config";
    case ErrorCode::fold_mismatch: return "fold-mismatch";
    case ErrorCode::degenerate_speed: return "degenerate-speed";
    case ErrorCode::resonant_second_harmonic: return "resonant-second-harmonic";
    case ErrorCode::no_admissible_mode: return "no-admissible-mode-found";
    case ErrorCode::correction_failed: return "correction-failed";
    case ErrorCode::cannot_start: return "cannot-start";
    case ErrorCode::regime_mismatch: return "regime-mismatch";
    case ErrorCode::evolution_diverged: return "evolution-diverged";
    case ErrorCode::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

const char* to_string(Parity p) {
  switch (p) {
    case Parity::even_cosine: return "even-cosine";
    case Parity::odd_sine: return "odd-sine";
    case Parity::full: return "full";
  }
  return "full";
}

Parity parity_from_string(const std::string& s) {
  if (s == "even-cosine") return Parity::even_cosine;
  if (s == "odd-sine") return Parity::odd_sine;
  if (s == "full") return Parity::full;
  throw Error(ErrorCode::invalid_argument, "unknown parity tag '" + s + "'");
}

namespace {

Parity combine_sum(Parity a, Parity b) { return a == b ? a : Parity::full; }

Parity combine_product(Parity a, Parity b) {
  if (a == Parity::full || b == Parity::full) return Parity::full;
  return a == b ? Parity::even_cosine : Parity::odd_sine;
}

Parity flip(Parity p) {
  switch (p) {
    case Parity::even_cosine: return Parity::odd_sine;
    case Parity::odd_sine: return Parity::even_cosine;
    case Parity::full: return Parity::full;
  }
  return Parity::full;
}

void require_same_fold(const TrigSeries& a, const TrigSeries& b) {
  if (a.fold() != b.fold()) {
    throw Error(ErrorCode::fold_mismatch,
                "series folds differ: " + std::to_string(a.fold()) + " vs " +
                    std::to_string(b.fold()));
  }
}

}  // namespace

TrigSeries::TrigSeries(int fold, int count, Parity parity)
    : fold_(fold), parity_(parity), cos_(count, 0.0), sin_(count, 0.0) {
  if (fold < 1) throw Error(ErrorCode::invalid_argument, "fold must be positive");
  if (count < 0) throw Error(ErrorCode::invalid_argument, "count must be non-negative");
}

TrigSeries TrigSeries::cosine(int fold, int count, int harmonic, double amplitude) {
  TrigSeries f(fold, count, Parity::even_cosine);
  if (harmonic >= 1 && harmonic <= count) f.set_cos(harmonic, amplitude);
  return f;
}

TrigSeries TrigSeries::sine(int fold, int count, int harmonic, double amplitude) {
  TrigSeries f(fold, count, Parity::odd_sine);
  if (harmonic >= 1 && harmonic <= count) f.set_sin(harmonic, amplitude);
  return f;
}

bool TrigSeries::is_finite() const {
  auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(cos_.begin(), cos_.end(), finite) &&
         std::all_of(sin_.begin(), sin_.end(), finite);
}

void TrigSeries::check_invariants() const {
  if (!is_finite()) throw Error(ErrorCode::invalid_argument, "non-finite series coefficient");
  auto zero = [](double v) { return v == 0.0; };
  if (parity_ == Parity::even_cosine && !std::all_of(sin_.begin(), sin_.end(), zero)) {
    throw Error(ErrorCode::invalid_argument, "even-cosine series carries sine coefficients");
  }
  if (parity_ == Parity::odd_sine && !std::all_of(cos_.begin(), cos_.end(), zero)) {
    throw Error(ErrorCode::invalid_argument, "odd-sine series carries cosine coefficients");
  }
}

TrigSeries TrigSeries::with_parity(Parity p) const {
  TrigSeries out = *this;
  out.parity_ = p;
  out.check_invariants();
  return out;
}

TrigSeries& TrigSeries::operator+=(const TrigSeries& other) {
  require_same_fold(*this, other);
  if (other.count() > count()) {
    cos_.resize(other.count(), 0.0);
    sin_.resize(other.count(), 0.0);
  }
  for (int j = 0; j < other.count(); ++j) {
    cos_[j] += other.cos_[j];
    sin_[j] += other.sin_[j];
  }
  parity_ = combine_sum(parity_, other.parity_);
  return *this;
}

TrigSeries& TrigSeries::operator-=(const TrigSeries& other) {
  require_same_fold(*this, other);
  if (other.count() > count()) {
    cos_.resize(other.count(), 0.0);
    sin_.resize(other.count(), 0.0);
  }
  for (int j = 0; j < other.count(); ++j) {
    cos_[j] -= other.cos_[j];
    sin_[j] -= other.sin_[j];
  }
  parity_ = combine_sum(parity_, other.parity_);
  return *this;
}

TrigSeries& TrigSeries::operator*=(double k) {
  for (auto& v : cos_) v *= k;
  for (auto& v : sin_) v *= k;
  return *this;
}

TrigSeries operator+(TrigSeries a, const TrigSeries& b) { return a += b; }
TrigSeries operator-(TrigSeries a, const TrigSeries& b) { return a -= b; }
TrigSeries operator*(double k, TrigSeries a) { return a *= k; }
TrigSeries operator-(TrigSeries a) { return a *= -1.0; }

TrigSeries deriv(const TrigSeries& f) {
  TrigSeries out(f.fold(), f.count(), flip(f.parity()));
  for (int j = 1; j <= f.count(); ++j) {
    const double k = f.wavenumber(j);
    out.set_sin(j, -k * f.cos_coeff(j));
    out.set_cos(j, k * f.sin_coeff(j));
  }
  return out;
}

TrigSeries antideriv(const TrigSeries& f) {
  TrigSeries out(f.fold(), f.count(), flip(f.parity()));
  for (int j = 1; j <= f.count(); ++j) {
    const double k = f.wavenumber(j);
    out.set_sin(j, f.cos_coeff(j) / k);
    out.set_cos(j, -f.sin_coeff(j) / k);
  }
  return out;
}

TrigSeries inverse_laplacian(const TrigSeries& f) {
  TrigSeries out(f.fold(), f.count(), f.parity());
  for (int j = 1; j <= f.count(); ++j) {
    const double k2 = f.wavenumber(j) * f.wavenumber(j);
    out.set_cos(j, -f.cos_coeff(j) / k2);
    out.set_sin(j, -f.sin_coeff(j) / k2);
  }
  return out;
}

OffsetSeries multiply_with_mean(const TrigSeries& f, const TrigSeries& g, ProductRange range) {
  require_same_fold(f, g);
  const int nf = f.count();
  const int ng = g.count();
  const int full = nf + ng;
  // Index 0 of the accumulators holds the mean.
  std::vector<double> c(full + 1, 0.0);
  std::vector<double> s(full + 1, 0.0);

  for (int i = 1; i <= nf; ++i) {
    const double fc = f.cos_coeff(i);
    const double fs = f.sin_coeff(i);
    if (fc == 0.0 && fs == 0.0) continue;
    for (int j = 1; j <= ng; ++j) {
      const double gc = g.cos_coeff(j);
      const double gs = g.sin_coeff(j);
      if (gc == 0.0 && gs == 0.0) continue;
      const int sum = i + j;
      const int diff = i - j;
      const int adiff = diff < 0 ? -diff : diff;
      // cos i cos j = (cos(i+j) + cos(i-j)) / 2
      // sin i sin j = (cos(i-j) - cos(i+j)) / 2
      c[sum] += 0.5 * (fc * gc - fs * gs);
      c[adiff] += 0.5 * (fc * gc + fs * gs);
      // cos i sin j = (sin(i+j) - sin(i-j)) / 2
      // sin i cos j = (sin(i+j) + sin(i-j)) / 2
      s[sum] += 0.5 * (fc * gs + fs * gc);
      if (diff != 0) {
        const double sgn = diff > 0 ? 1.0 : -1.0;
        s[adiff] += 0.5 * sgn * (fs * gc - fc * gs);
      }
    }
  }

  const int keep = range == ProductRange::extend ? full : std::max(nf, ng);
  OffsetSeries out{c[0], TrigSeries(f.fold(), keep, combine_product(f.parity(), g.parity()))};
  const Parity p = out.wave.parity();
  for (int j = 1; j <= keep; ++j) {
    if (p != Parity::odd_sine) out.wave.set_cos(j, c[j]);
    if (p != Parity::even_cosine) out.wave.set_sin(j, s[j]);
  }
  return out;
}

TrigSeries multiply(const TrigSeries& f, const TrigSeries& g, ProductRange range) {
  return multiply_with_mean(f, g, range).wave;
}

OffsetSeries multiply(const OffsetSeries& f, const OffsetSeries& g, ProductRange range) {
  OffsetSeries out = multiply_with_mean(f.wave, g.wave, range);
  out.mean += f.mean * g.mean;
  TrigSeries linear = f.mean * g.wave;
  linear += g.mean * f.wave;
  out.wave += linear;
  return out;
}

double norm(const TrigSeries& f, const NormParams& p) { return tail_norm(f, p, 1); }

double tail_norm(const TrigSeries& f, const NormParams& p, int first) {
  double acc = 0.0;
  for (int j = std::max(first, 1); j <= f.count(); ++j) {
    const double a = f.cos_coeff(j);
    const double b = f.sin_coeff(j);
    const double w = std::pow(static_cast<double>(j), 2.0 * p.s) * std::exp(2.0 * p.sigma * j);
    acc += w * (a * a + b * b);
  }
  return std::sqrt(acc);
}

TrigSeries shift(const TrigSeries& f, double h) {
  // When h is an integer multiple of pi/fold the rotation is a pure sign
  // pattern and parity survives exactly.
  const double turns = h * f.fold() / std::numbers::pi;
  const double nearest = std::round(turns);
  if (std::abs(turns - nearest) <= 1e-14 * std::max(1.0, std::abs(turns))) {
    const long long q = static_cast<long long>(nearest);
    TrigSeries out = f;
    for (int j = 1; j <= f.count(); ++j) {
      if ((static_cast<long long>(j) * q) % 2 != 0) {
        out.set_cos(j, -f.cos_coeff(j));
        out.set_sin(j, -f.sin_coeff(j));
      }
    }
    return out;
  }
  TrigSeries out(f.fold(), f.count(), Parity::full);
  for (int j = 1; j <= f.count(); ++j) {
    const double kh = f.wavenumber(j) * h;
    const double ch = std::cos(kh);
    const double sh = std::sin(kh);
    const double a = f.cos_coeff(j);
    const double b = f.sin_coeff(j);
    // a cos(k(x+h)) + b sin(k(x+h))
    out.set_cos(j, a * ch + b * sh);
    out.set_sin(j, b * ch - a * sh);
  }
  return out;
}

TrigSeries resized(const TrigSeries& f, int count) {
  TrigSeries out(f.fold(), count, f.parity());
  const int n = std::min(count, f.count());
  for (int j = 1; j <= n; ++j) {
    out.set_cos(j, f.cos_coeff(j));
    out.set_sin(j, f.sin_coeff(j));
  }
  return out;
}

double evaluate(const TrigSeries& f, double x) {
  double acc = 0.0;
  for (int j = 1; j <= f.count(); ++j) {
    const double kx = f.wavenumber(j) * x;
    acc += f.cos_coeff(j) * std::cos(kx) + f.sin_coeff(j) * std::sin(kx);
  }
  return acc;
}

double evaluate_deriv(const TrigSeries& f, double x) {
  double acc = 0.0;
  for (int j = 1; j <= f.count(); ++j) {
    const double k = f.wavenumber(j);
    const double kx = k * x;
    acc += k * (f.sin_coeff(j) * std::cos(kx) - f.cos_coeff(j) * std::sin(kx));
  }
  return acc;
}

double evaluate_second_deriv(const TrigSeries& f, double x) {
  double acc = 0.0;
  for (int j = 1; j <= f.count(); ++j) {
    const double k = f.wavenumber(j);
    const double kx = k * x;
    acc -= k * k * (f.cos_coeff(j) * std::cos(kx) + f.sin_coeff(j) * std::sin(kx));
  }
  return acc;
}

std::vector<double> sample(const TrigSeries& f, int points) {
  std::vector<double> out(points);
  for (int p = 0; p < points; ++p) {
    // Harmonics by angle addition from the fundamental at this node.
    const double theta = 2.0 * std::numbers::pi * p / points;
    const double c1 = std::cos(theta);
    const double s1 = std::sin(theta);
    double ck = c1;
    double sk = s1;
    double acc = 0.0;
    for (int j = 1; j <= f.count(); ++j) {
      acc += f.cos_coeff(j) * ck + f.sin_coeff(j) * sk;
      const double next_c = ck * c1 - sk * s1;
      sk = sk * c1 + ck * s1;
      ck = next_c;
    }
    out[p] = acc;
  }
  return out;
}

double sup_abs_coeff(const TrigSeries& f) {
  double m = 0.0;
  for (double v : f.cos_coeffs()) m = std::max(m, std::abs(v));
  for (double v : f.sin_coeffs()) m = std::max(m, std::abs(v));
  return m;
}

double sup_norm(const TrigSeries& f, int points) {
  double m = 0.0;
  for (double v : sample(f, points)) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace layerwave
