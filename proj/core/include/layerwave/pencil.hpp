#pragma once

// Linear analysis of the flat layer state: the 4x4 mode pencil M_j(a, c),
// its quartic determinant, bifurcation speeds and kernel/cokernel vectors.
//
// Interface ordering everywhere in the library is
//   0: (+, 1)  ion lower     1: (+, 2)  ion upper
//   2: (-, 1)  electron lower 3: (-, 2)  electron upper

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

namespace layerwave {

enum class Regime { generic, symmetric, successive };

const char* to_string(Regime r);

inline constexpr int kInterfaces = 4;
/// Species sign: +1 for ions, -1 for electrons.
inline constexpr std::array<int, 4> kSpeciesSign{+1, +1, -1, -1};
/// (-1)^k with k the interface level (1 lower, 2 upper).
inline constexpr std::array<int, 4> kLevelSign{-1, +1, -1, +1};
/// Weights of the net charge d = r+2 - r+1 - r-2 + r-1.
inline constexpr std::array<int, 4> kChargeWeight{-1, +1, +1, -1};

class LayerConfig {
 public:
  /// Use classify_config to build validated instances.
  LayerConfig(std::array<double, 4> a, Regime regime) : a_(a), regime_(regime) {}

  const std::array<double, 4>& a() const { return a_; }
  double operator[](int i) const { return a_[i]; }
  Regime regime() const { return regime_; }
  /// Common layer width a+2 - a+1 = a-2 - a-1.
  double width() const { return a_[1] - a_[0]; }
  double scale() const;

 private:
  std::array<double, 4> a_;
  Regime regime_;
};

/// Validates the equal-width constraint and labels the regime; components
/// are compared with absolute tolerance 1e-12.
LayerConfig classify_config(const std::array<double, 4>& a);

struct ModePencil {
  int j;
  LayerConfig config;
  double c;
  Eigen::Matrix4d entries;
};

ModePencil assemble_M(int j, const LayerConfig& cfg, double c);
Eigen::Matrix4d pencil_matrix(int j, const LayerConfig& cfg, double c);

/// Coefficients of det M_m(a, c) in ascending powers of c.
std::array<double, 5> det_poly(int m, const LayerConfig& cfg);
double eval_poly(const std::array<double, 5>& coeffs, double c);

enum class Provenance { closed_form, quartic_root };

const char* to_string(Provenance p);

struct SpeedRecord {
  std::complex<double> value;
  int multiplicity = 1;
  bool admissible = false;
  Provenance provenance = Provenance::quartic_root;
};

struct SpeedSet {
  int mode;
  Regime regime;
  std::vector<SpeedRecord> speeds;  // ascending by real part
  /// Closed-form regimes only: largest distance between a closed-form speed
  /// and the nearest companion-matrix root. Zero in the generic regime.
  double closed_form_discrepancy = 0.0;

  std::vector<double> admissible() const;
};

/// Roots of a real quartic (ascending coefficients) from the companion
/// matrix, with near-coincident roots merged into one record of
/// multiplicity two and every root polished by Newton's method.
std::vector<SpeedRecord> quartic_roots(const std::array<double, 5>& coeffs);

/// c_m^{+/-}(alpha, beta) for a layer of width `width`.
double closed_form_speed(double alpha, double beta, double width, int m, int sign);

SpeedSet bifurcation_speeds(int m, const LayerConfig& cfg);

Eigen::Vector4d kernel_vector(int m, const LayerConfig& cfg, double c_star);
Eigen::Vector4d cokernel_vector(int m, const LayerConfig& cfg, double c_star);
/// Component-wise (a - c)^{-2}.
Eigen::Vector4d squared_reciprocal(const LayerConfig& cfg, double c_star);

struct Transversality {
  double value;
  /// |value| < 1e-10: numerically indistinguishable from a failure of
  /// transversality.
  bool suspect;
};

Transversality transversality(int m, const LayerConfig& cfg, double c_star);

struct KernelData {
  Eigen::Vector4d v0;
  Eigen::Vector4d w0;
  Eigen::Vector4d w0_tilde;
  double transversality_value;
};

KernelData kernel_data(int m, const LayerConfig& cfg, double c_star);

/// Smallest m <= cap whose four speeds are real, simple and distinct from
/// the components of a. Symmetric and successive configurations admit
/// bifurcation at every mode, so the answer there is 1.
int min_admissible_mode(const LayerConfig& cfg, int cap);

/// Index of the component of a nearest to c; ties go to the lower level
/// first, then to the ion interface.
int nearest_component(const LayerConfig& cfg, double c);

}  // namespace layerwave
