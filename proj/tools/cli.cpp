#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include <layerwave/error.hpp>
#include <layerwave/io.hpp>

namespace layerwave::cli {

namespace fs = std::filesystem;
using nlohmann::json;

json to_json(const RunConfig& c) {
  return {{"command", c.command},   {"a", c.a},
          {"m", c.m},               {"N", c.n},
          {"s", c.s},               {"sigma", c.sigma},
          {"tol", c.tol},           {"out", c.out},
          {"speed_index", c.speed_index}, {"cap", c.cap},
          {"steps", c.steps},       {"ds0", c.ds0},
          {"h_max", c.h_max},       {"max_n", c.max_n},
          {"snapshot_every", c.snapshot_every}, {"amplitude", c.amplitude},
          {"dt", c.dt},             {"periods", c.periods}};
}

namespace {

// Raised for problems with the request itself rather than the numerics.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Session {
 public:
  Session(RunConfig rc, std::ostream& out) : rc_(std::move(rc)), out_(out), cfg_(validate()) {
    fs::create_directories(rc_.out);
  }

  int dispatch() {
    if (rc_.command == "speeds") return speeds();
    if (rc_.command == "local") return local();
    if (rc_.command == "continue") return continuation();
    if (rc_.command == "evolve") return evolution();
    if (rc_.command == "ep") return euler_poisson();
    throw UsageError("unknown command '" + rc_.command + "'");
  }

 private:
  LayerConfig validate() {
    if (rc_.n < 8) throw UsageError("--n must be at least 8");
    if (!(rc_.tol > 0.0) || !(rc_.ds0 > 0.0) || !(rc_.h_max > 0.0)) {
      throw UsageError("tolerances and step sizes must be positive");
    }
    if (rc_.m < 0) throw UsageError("--m must be positive (0 scans for the first admissible mode)");
    try {
      LayerConfig cfg = classify_config(rc_.a);
      if (rc_.m == 0) rc_.m = min_admissible_mode(cfg, rc_.cap);
      return cfg;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::invalid_config) throw UsageError(e.what());
      throw;
    }
  }

  NormParams norm_params() const { return {rc_.s, rc_.sigma}; }

  fs::path path(const std::string& name) const { return fs::path(rc_.out) / name; }

  void write_json(const std::string& name, json body) const {
    body["run_config"] = to_json(rc_);
    std::ofstream f(path(name));
    f << std::setw(2) << body << '\n';
  }

  std::ofstream open_csv(const std::string& name) const {
    std::ofstream f(path(name));
    f << "# run_config: " << to_json(rc_).dump() << '\n';
    return f;
  }

  double chosen_speed() const {
    const auto speeds = bifurcation_speeds(rc_.m, cfg_).admissible();
    if (speeds.empty()) {
      throw Error(ErrorCode::no_admissible_mode,
                  "mode " + std::to_string(rc_.m) + " has no admissible speed");
    }
    if (rc_.speed_index == "+") return speeds.back();
    if (rc_.speed_index == "-") return speeds.front();
    int idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoi(rc_.speed_index, &used);
      if (used != rc_.speed_index.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw UsageError("--speed-index must be '+', '-' or an integer");
    }
    if (idx < 0 || idx >= static_cast<int>(speeds.size())) {
      throw UsageError("--speed-index out of range: " + std::to_string(speeds.size()) +
                       " admissible speeds");
    }
    return speeds[idx];
  }

  ContinuationOptions continuation_options() const {
    ContinuationOptions o;
    o.newton.tol = rc_.tol;
    o.norm = norm_params();
    o.count = rc_.n;
    o.max_count = std::max(rc_.max_n, rc_.n);
    o.s0 = rc_.ds0;
    o.h_max = rc_.h_max;
    o.max_points = rc_.steps;
    return o;
  }

  // Point of the + arm whose norm is closest to amplitude * width.
  WaveSolution wave_at_amplitude(const LocalExpansion& loc) const {
    ContinuationOptions o = continuation_options();
    const double target = rc_.amplitude * cfg_.width();
    const NormParams p = norm_params();
    o.stop_when = [&](const WaveSolution& sol) { return norm(sol.state, p) >= target; };
    const Branch br = continue_branch(loc, +1, o);
    const auto best = std::min_element(br.points.begin(), br.points.end(), [&](auto& x, auto& y) {
      return std::abs(norm(x.solution.state, p) - target) <
             std::abs(norm(y.solution.state, p) - target);
    });
    return best->solution;
  }

  int speeds() {
    const SpeedSet set = bifurcation_speeds(rc_.m, cfg_);
    write_json("speeds.json", {{"speed_set", layerwave::to_json(set)}});
    out_ << "regime " << to_string(set.regime) << ", m = " << set.mode << '\n';
    out_ << std::setprecision(12);
    for (const auto& rec : set.speeds) {
      out_ << "  c = " << rec.value.real();
      if (rec.value.imag() != 0.0) out_ << (rec.value.imag() > 0 ? " + " : " - ") << std::abs(rec.value.imag()) << "i";
      out_ << "  multiplicity " << rec.multiplicity << (rec.admissible ? "  admissible" : "") << '\n';
    }
    return 0;
  }

  int local() {
    const LocalExpansion loc = local_expansion(rc_.m, cfg_, chosen_speed());
    write_json("local.json", {{"local_expansion", layerwave::to_json(loc)}});
    out_ << std::setprecision(12) << "c* = " << loc.c_star << ", c''(0) = " << loc.c_second << " ("
         << to_string(loc.pitchfork) << ")\n";
    return 0;
  }

  int continuation() {
    const LocalExpansion loc = local_expansion(rc_.m, cfg_, chosen_speed());
    const ContinuationOptions o = continuation_options();
    const auto arms = continue_both_arms(loc, o);
    const NormParams p = norm_params();

    json summary = {{"local_expansion", layerwave::to_json(loc)}, {"arms", json::array()}};
    for (const Branch& br : arms) {
      const std::string tag = br.arm > 0 ? "plus" : "minus";
      auto csv = open_csv("branch_" + tag + ".csv");
      write_branch_csv(csv, br, p);
      if (rc_.snapshot_every > 0) {
        fs::create_directories(path("snapshots"));
        for (std::size_t k = 0; k < br.points.size(); k += rc_.snapshot_every) {
          std::ostringstream name;
          name << "snapshots/" << tag << '_' << std::setw(5) << std::setfill('0') << k << ".json";
          write_json(name.str(), {{"s", br.arm * br.points[k].s},
                                  {"solution", layerwave::to_json(br.points[k].solution)}});
        }
      }
      summary["arms"].push_back({{"arm", tag},
                                 {"points", br.points.size()},
                                 {"termination", to_string(br.termination)},
                                 {"detail", br.termination.detail},
                                 {"final_c", br.points.back().solution.c}});
      out_ << tag << " arm: " << br.points.size() << " points, termination "
           << to_string(br.termination) << '\n';
    }

    // Both arms joined through the bifurcation point: c against the signed
    // first-harmonic amplitude.
    auto diagram = open_csv("diagram.csv");
    diagram << "arm,s_local,c,amp\n" << std::setprecision(17);
    for (auto it = arms[1].points.rbegin(); it != arms[1].points.rend(); ++it) {
      diagram << "minus," << branch_parameter(loc, it->solution.state) << ',' << it->solution.c
              << ',' << it->solution.state[0].cos_coeff(1) << '\n';
    }
    for (const auto& pt : arms[0].points) {
      diagram << "plus," << branch_parameter(loc, pt.solution.state) << ',' << pt.solution.c << ','
              << pt.solution.state[0].cos_coeff(1) << '\n';
    }
    write_json("continue.json", summary);
    return 0;
  }

  int evolution() {
    const LocalExpansion loc = local_expansion(rc_.m, cfg_, chosen_speed());
    const WaveSolution wave = wave_at_amplitude(loc);
    const PhaseState r0 = phase_state(wave.state);
    const double horizon = rc_.periods * 2.0 * std::numbers::pi / (rc_.m * std::abs(wave.c));
    const double bound = max_stable_dt(cfg_, r0);
    const double dt_req = rc_.dt > 0.0 ? rc_.dt : bound;
    const int steps = static_cast<int>(std::ceil(horizon / dt_req));
    const double dt = horizon / steps;
    const Trajectory traj = evolve(cfg_, r0, dt, steps);

    const PhaseState expected = shift(r0, -wave.c * horizon);
    double err = 0.0;
    for (int i = 0; i < kInterfaces; ++i) {
      err = std::max(err, sup_norm(traj.final_state[i] - expected[i], 16 * wave.state.count()));
    }
    const double e0 = traj.log.front().energy.e_total;
    const double drift = std::abs(traj.log.back().energy.e_total - e0) / std::abs(e0);

    auto csv = open_csv("trajectory.csv");
    write_trajectory_csv(csv, traj);
    write_json("evolve.json", {{"wave", layerwave::to_json(wave)},
                               {"dt", dt},
                               {"steps", steps},
                               {"horizon", horizon},
                               {"translation_sup_error", err},
                               {"energy_drift", drift}});
    out_ << std::setprecision(6) << "evolved " << steps << " steps, sup error vs translation "
         << err << ", relative energy drift " << drift << '\n';
    return 0;
  }

  int euler_poisson() {
    const double a = symmetric_half_width(cfg_);
    const EPSpeeds sp = ep_speeds(a, rc_.m);
    const LocalExpansion loc = local_expansion(rc_.m, cfg_, chosen_speed());
    const WaveSolution wave = wave_at_amplitude(loc);
    const EPState ep = map_to_ep(wave);
    const EPResidual res = ep_residual(ep);
    const double rho_min = min_density(ep, 16 * wave.state.count());

    auto csv = open_csv("ep_residual.csv");
    csv << "quantity,value\n" << std::setprecision(17);
    csv << "continuity_sup," << res.continuity_sup << '\n';
    csv << "momentum_sup," << res.momentum_sup << '\n';
    csv << "min_density," << rho_min << '\n';
    csv << "vlasov_residual," << wave.residual_norm << '\n';
    write_json("ep_state.json", {{"state", layerwave::to_json(ep)},
                                 {"residual", layerwave::to_json(res)},
                                 {"min_density", rho_min},
                                 {"speeds", layerwave::to_json(sp)}});
    out_ << std::setprecision(12) << "determinant speeds " << sp.c_minus << ", " << sp.c_plus
         << "; closed form with factor " << sp.matching_factor << " matches\n"
         << "EP residual " << res.max() << ", min density " << rho_min << '\n';
    return 0;
  }

  RunConfig rc_;
  std::ostream& out_;
  LayerConfig cfg_;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  CLI::App app{"Traveling layer waves: bifurcation speeds, local branches, continuation"};
  app.set_config("--config", "", "Flat key = value configuration file");
  app.require_subcommand(1);
  app.fallthrough();

  std::vector<double> a;
  app.add_option("--a", a, "Interface velocities a+1,a+2,a-1,a-2")->delimiter(',')->expected(4);
  app.add_option("--m", rc.m, "Symmetry fold (0: first admissible mode)");
  app.add_option("--n", rc.n, "Retained harmonics");
  app.add_option("--s", rc.s, "Sobolev index of the norm");
  app.add_option("--sigma", rc.sigma, "Analyticity width of the norm");
  app.add_option("--tol", rc.tol, "Newton tolerance on the residual coefficients");
  app.add_option("--out", rc.out, "Output directory");
  app.add_option("--speed-index", rc.speed_index, "'+', '-' or index into admissible speeds");
  app.add_option("--cap", rc.cap, "Mode scan limit for --m 0");
  app.add_option("--steps", rc.steps, "Maximum points per arm");
  app.add_option("--ds0", rc.ds0, "Local parameter of the first branch point");
  app.add_option("--h-max", rc.h_max, "Largest arclength step");
  app.add_option("--max-n", rc.max_n, "Largest truncation reached by refinement");
  app.add_option("--snapshot-every", rc.snapshot_every, "Write every k-th branch point as JSON");
  app.add_option("--amplitude", rc.amplitude, "Target norm as a fraction of the layer width");
  app.add_option("--dt", rc.dt, "Time step (default: stability bound)");
  app.add_option("--periods", rc.periods, "Evolution horizon in spatial periods");

  const std::pair<const char*, const char*> commands[] = {
      {"speeds", "Bifurcation speeds of mode m"},
      {"local", "Kernel, second harmonic and pitchfork coefficient at one speed"},
      {"continue", "Continue both arms of the branch and write the diagram"},
      {"evolve", "Time-evolve a steady wave over a number of periods"},
      {"ep", "Map a steady wave to the Euler-Poisson fluid and report the residual"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return 2;
  }
  if (a.size() != 4) {
    err << "--a needs four comma-separated values\n";
    return 2;
  }
  std::copy(a.begin(), a.end(), rc.a.begin());
  rc.command = app.get_subcommands().front()->get_name();

  try {
    Session session(rc, out);
    return session.dispatch();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "solver failure [" << to_string(e.code()) << "]: " << e.what() << '\n';
    try {
      fs::create_directories(rc.out);
      std::ofstream f(fs::path(rc.out) / "error.json");
      f << std::setw(2)
        << json{{"error", std::string(to_string(e.code()))},
                {"message", e.what()},
                {"run_config", to_json(rc)}}
        << '\n';
    } catch (const std::exception&) {
    }
    return 1;
  }
}

}  // namespace layerwave::cli
