#pragma once

#include <cmath>

#include <layerwave/continuation.hpp>
#include <layerwave/localbranch.hpp>
#include <layerwave/pencil.hpp>

namespace fixture {

inline const layerwave::LayerConfig& symmetric() {
  static const auto cfg = layerwave::classify_config({-1, 1, -1, 1});
  return cfg;
}

inline const layerwave::LayerConfig& successive() {
  static const auto cfg = layerwave::classify_config({0, 1, 1, 2});
  return cfg;
}

inline const layerwave::LayerConfig& generic() {
  static const auto cfg = layerwave::classify_config({0, 1, 2.5, 3.5});
  return cfg;
}

inline layerwave::LocalExpansion symmetric_origin(int m = 1) {
  const auto adm = layerwave::bifurcation_speeds(m, symmetric()).admissible();
  return layerwave::local_expansion(m, symmetric(), adm.back());
}

/// Nontrivial steady wave with the speed pinned at the predicted value for
/// local parameter s.
inline layerwave::WaveSolution pinned_wave(const layerwave::LocalExpansion& loc, double s, int count) {
  const auto [c, guess] = layerwave::predictor(loc, s, count);
  layerwave::ArclengthConstraint pin;
  pin.anchor = layerwave::pack(c, guess);
  return layerwave::newton_correct(loc.cfg, c, guess, pin, {}).solution;
}

}  // namespace fixture
