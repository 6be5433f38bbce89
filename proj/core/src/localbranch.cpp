#include "layerwave/localbranch.hpp"

#include <cmath>

#include "layerwave/error.hpp"

namespace layerwave {

const char* to_string(Pitchfork p) {
  switch (p) {
    case Pitchfork::supercritical: return "supercritical";
    case Pitchfork::subcritical: return "subcritical";
    case Pitchfork::degenerate: return "degenerate";
  }
  return "degenerate";
}

SeriesQuad hessian_action(const InterfaceState& h, const InterfaceState& h2) {
  SeriesQuad out;
  for (int i = 0; i < kInterfaces; ++i) out[i] = deriv(multiply(h[i], h2[i]));
  return out;
}

Theta0 theta0(int m, const LayerConfig& cfg, double c_star) {
  const Eigen::Matrix4d M = pencil_matrix(2 * m, cfg, c_star);
  const Eigen::JacobiSVD<Eigen::Matrix4d> svd(M);
  const auto& sv = svd.singularValues();
  if (sv(3) <= 1e-12 * sv(0)) {
    throw Error(ErrorCode::resonant_second_harmonic,
                "mode 2m is singular at this speed; the second-harmonic correction is undefined");
  }
  const Eigen::Vector4d rhs = 2.0 * m * m * squared_reciprocal(cfg, c_star);
  const Eigen::Vector4d A = M.partialPivLu().solve(rhs);
  return Theta0{A, (M * A - rhs).cwiseAbs().maxCoeff() / rhs.cwiseAbs().maxCoeff()};
}

double c_second_derivative(int m, const LayerConfig& cfg, double c_star) {
  const Eigen::Vector4d v0 = kernel_vector(m, cfg, c_star);
  const Eigen::Vector4d w0 = cokernel_vector(m, cfg, c_star);
  const Transversality tr = transversality(m, cfg, c_star);
  if (tr.suspect) {
    throw Error(ErrorCode::degenerate_speed, "transversality pairing vanishes numerically");
  }
  const Eigen::Vector4d A = theta0(m, cfg, c_star).amplitude;
  // d/dx[v0 cos(mx) A cos(2mx)] carries -m v0 A / 2 on sin(mx); the cokernel
  // pairing reads only that harmonic.
  const double numerator = -0.5 * m * w0.dot(v0.cwiseProduct(A));
  return numerator / tr.value;
}

LocalExpansion local_expansion(int m, const LayerConfig& cfg, double c_star) {
  const KernelData k = kernel_data(m, cfg, c_star);
  const double c2 = c_second_derivative(m, cfg, c_star);
  const double tiny = 1e-14 * (1.0 + std::abs(c_star));
  Pitchfork kind = Pitchfork::degenerate;
  if (c2 > tiny) kind = Pitchfork::supercritical;
  if (c2 < -tiny) kind = Pitchfork::subcritical;
  return LocalExpansion{m,
                        cfg,
                        c_star,
                        k.v0,
                        k.w0,
                        k.w0_tilde,
                        k.transversality_value,
                        theta0(m, cfg, c_star).amplitude,
                        c2,
                        kind,
                        nearest_component(cfg, c_star)};
}

std::pair<double, InterfaceState> predictor(const LocalExpansion& loc, double s, int count) {
  return {loc.c_star + 0.5 * loc.c_second * s * s,
          InterfaceState::mode(loc.m, count, 1, s * loc.v0)};
}

double branch_parameter(const LocalExpansion& loc, const InterfaceState& r) {
  Eigen::Vector4d first;
  for (int i = 0; i < kInterfaces; ++i) first(i) = r[i].cos_coeff(1);
  return first.dot(loc.v0) / loc.v0.squaredNorm();
}

}  // namespace layerwave
