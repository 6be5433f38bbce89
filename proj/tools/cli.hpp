#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

namespace layerwave::cli {

struct RunConfig {
  std::string command;
  std::array<double, 4> a{};
  int m = 1;
  int n = 64;
  double s = 2.0;
  double sigma = 0.1;
  double tol = 1e-11;
  std::string out = "layerwave-out";

  std::string speed_index = "+";  // "+", "-" or an index into the admissible speeds
  int cap = 256;                  // mode scan limit when --m is 0
  int steps = 400;                // points per arm
  double ds0 = 1e-3;
  double h_max = 0.1;
  int max_n = 256;
  int snapshot_every = 0;
  double amplitude = 0.1;  // evolve/ep: target norm as a fraction of the layer width
  double dt = 0.0;         // 0 picks the stability bound
  double periods = 1.0;
};

nlohmann::json to_json(const RunConfig& cfg);

/// Exit codes: 0 success, 1 solver failure, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace layerwave::cli
