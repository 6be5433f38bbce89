#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace layerwave {

enum class ErrorCode {
  invalid_config,
  fold_mismatch,
  degenerate_speed,
  resonant_second_harmonic,
  no_admissible_mode,
  correction_failed,
  cannot_start,
  regime_mismatch,
  evolution_diverged,
  invalid_argument,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code; every recoverable failure in
/// the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace layerwave
