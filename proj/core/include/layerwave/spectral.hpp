#pragma once

// Truncated trigonometric series on the 2*pi torus with m-fold symmetry.
//
// A series of fold m and count N stores the coefficients of
//   f(x) = sum_{j=1..N} cos_j cos(j m x) + sin_j sin(j m x),
// i.e. harmonic j of the fundamental m. The mean is never stored.

#include <span>
#include <string>
#include <vector>

namespace layerwave {

enum class Parity { even_cosine, odd_sine, full };

const char* to_string(Parity p);
Parity parity_from_string(const std::string& s);

struct NormParams {
  double s = 2.0;
  double sigma = 0.1;
};

class TrigSeries {
 public:
  TrigSeries() = default;
  TrigSeries(int fold, int count, Parity parity);

  /// amplitude * cos(harmonic * fold * x)
  static TrigSeries cosine(int fold, int count, int harmonic, double amplitude = 1.0);
  /// amplitude * sin(harmonic * fold * x)
  static TrigSeries sine(int fold, int count, int harmonic, double amplitude = 1.0);

  int fold() const { return fold_; }
  int count() const { return static_cast<int>(cos_.size()); }
  Parity parity() const { return parity_; }

  // Harmonic index j is 1-based.
  double cos_coeff(int j) const { return cos_[j - 1]; }
  double sin_coeff(int j) const { return sin_[j - 1]; }
  void set_cos(int j, double v) { cos_[j - 1] = v; }
  void set_sin(int j, double v) { sin_[j - 1] = v; }

  std::span<const double> cos_coeffs() const { return cos_; }
  std::span<const double> sin_coeffs() const { return sin_; }
  std::span<double> cos_coeffs() { return cos_; }
  std::span<double> sin_coeffs() { return sin_; }

  /// Wavenumber of harmonic j, i.e. j * fold.
  double wavenumber(int j) const { return static_cast<double>(j) * fold_; }

  /// Throws invalid_argument if coefficients are non-finite or the parity
  /// constraint is violated.
  void check_invariants() const;
  bool is_finite() const;

  /// Relabels the parity; the absent coefficient block must already be zero.
  TrigSeries with_parity(Parity p) const;

  TrigSeries& operator+=(const TrigSeries& other);
  TrigSeries& operator-=(const TrigSeries& other);
  TrigSeries& operator*=(double k);

 private:
  int fold_ = 1;
  Parity parity_ = Parity::full;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

TrigSeries operator+(TrigSeries a, const TrigSeries& b);
TrigSeries operator-(TrigSeries a, const TrigSeries& b);
TrigSeries operator*(double k, TrigSeries a);
TrigSeries operator-(TrigSeries a);

/// A zero-mean series plus a separately tracked constant term.
struct OffsetSeries {
  double mean = 0.0;
  TrigSeries wave;
};

enum class ProductRange {
  truncate,  // keep harmonics 1..max(N_f, N_g)
  extend,    // keep the full convolution range 1..N_f + N_g
};

TrigSeries deriv(const TrigSeries& f);
TrigSeries antideriv(const TrigSeries& f);
/// Inverse Laplacian on zero-mean series: cos(kx) -> -cos(kx)/k^2.
TrigSeries inverse_laplacian(const TrigSeries& f);

/// Exact product by full convolution; harmonics above the requested range are
/// discarded and the mean is returned separately.
OffsetSeries multiply_with_mean(const TrigSeries& f, const TrigSeries& g,
                                ProductRange range = ProductRange::truncate);
TrigSeries multiply(const TrigSeries& f, const TrigSeries& g,
                    ProductRange range = ProductRange::truncate);
/// Product of series that carry means.
OffsetSeries multiply(const OffsetSeries& f, const OffsetSeries& g,
                      ProductRange range = ProductRange::truncate);

/// Sobolev-analytic norm (sum_j j^{2s} e^{2 sigma j} (cos_j^2 + sin_j^2))^{1/2}
/// with j the reduced harmonic index.
double norm(const TrigSeries& f, const NormParams& p);
/// Norm restricted to harmonics j >= first.
double tail_norm(const TrigSeries& f, const NormParams& p, int first);

/// Coefficients of x -> f(x + h).
TrigSeries shift(const TrigSeries& f, double h);

/// Zero-padded or truncated copy with a new count.
TrigSeries resized(const TrigSeries& f, int count);

double evaluate(const TrigSeries& f, double x);
double evaluate_deriv(const TrigSeries& f, double x);
double evaluate_second_deriv(const TrigSeries& f, double x);

/// Samples over one period [0, 2*pi/fold) at `points` uniform nodes.
std::vector<double> sample(const TrigSeries& f, int points);

double sup_abs_coeff(const TrigSeries& f);
/// max_x |f(x)| estimated on a uniform grid of `points` nodes over one period.
double sup_norm(const TrigSeries& f, int points);

}  // namespace layerwave
