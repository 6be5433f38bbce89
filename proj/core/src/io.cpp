#include "layerwave/io.hpp"

#include <iomanip>

#include "layerwave/error.hpp"

namespace layerwave {

namespace {

constexpr const char* kInterfaceNames[4] = {"r_plus_1", "r_plus_2", "r_minus_1", "r_minus_2"};

json vec(const Eigen::Vector4d& v) { return json::array({v(0), v(1), v(2), v(3)}); }

json config(const LayerConfig& cfg) {
  return json::array({cfg[0], cfg[1], cfg[2], cfg[3]});
}

}  // namespace

json to_json(const TrigSeries& f) {
  json j;
  j["fold"] = f.fold();
  j["count"] = f.count();
  j["parity"] = to_string(f.parity());
  j["cos"] = std::vector<double>(f.cos_coeffs().begin(), f.cos_coeffs().end());
  j["sin"] = std::vector<double>(f.sin_coeffs().begin(), f.sin_coeffs().end());
  return j;
}

TrigSeries series_from_json(const json& j) {
  try {
    TrigSeries f(j.at("fold").get<int>(), j.at("count").get<int>(),
                 parity_from_string(j.at("parity").get<std::string>()));
    const auto c = j.at("cos").get<std::vector<double>>();
    const auto s = j.at("sin").get<std::vector<double>>();
    if (static_cast<int>(c.size()) != f.count() || static_cast<int>(s.size()) != f.count()) {
      throw Error(ErrorCode::invalid_argument, "series arrays do not match count");
    }
    for (int k = 1; k <= f.count(); ++k) {
      f.set_cos(k, c[k - 1]);
      f.set_sin(k, s[k - 1]);
    }
    f.check_invariants();
    return f;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("malformed series: ") + e.what());
  }
}

json to_json(const OffsetSeries& f) {
  json j = to_json(f.wave);
  j["mean"] = f.mean;
  return j;
}

json to_json(const SpeedSet& s) {
  json speeds = json::array();
  for (const auto& rec : s.speeds) {
    json r;
    if (rec.value.imag() == 0.0) {
      r["c"] = rec.value.real();
    } else {
      r["c"] = {{"re", rec.value.real()}, {"im", rec.value.imag()}};
    }
    r["multiplicity"] = rec.multiplicity;
    r["admissible"] = rec.admissible;
    r["provenance"] = to_string(rec.provenance);
    speeds.push_back(r);
  }
  return {{"m", s.mode},
          {"regime", to_string(s.regime)},
          {"speeds", speeds},
          {"closed_form_discrepancy", s.closed_form_discrepancy}};
}

json to_json(const LocalExpansion& loc) {
  return {{"m", loc.m},
          {"a", config(loc.cfg)},
          {"regime", to_string(loc.cfg.regime())},
          {"c_star", loc.c_star},
          {"v0", vec(loc.v0)},
          {"w0", vec(loc.w0)},
          {"w0_tilde", vec(loc.w0_tilde)},
          {"transversality", loc.transversality},
          {"theta0_amplitude", vec(loc.theta0_amplitude)},
          {"c_second", loc.c_second},
          {"pitchfork", to_string(loc.pitchfork)},
          {"nearest_component", kInterfaceNames[loc.nearest_component]}};
}

json to_json(const WaveSolution& sol) {
  json series;
  for (int i = 0; i < kInterfaces; ++i) series[kInterfaceNames[i]] = to_json(sol.state[i]);
  return {{"a", config(sol.cfg)},
          {"m", sol.state.fold()},
          {"N", sol.state.count()},
          {"c", sol.c},
          {"series", series},
          {"residual_norm", sol.residual_norm},
          {"m1", sol.monitors.m1},
          {"m2", sol.monitors.m2}};
}

WaveSolution solution_from_json(const json& j) {
  try {
    const auto a = j.at("a").get<std::array<double, 4>>();
    const LayerConfig cfg = classify_config(a);
    InterfaceState r;
    for (int i = 0; i < kInterfaces; ++i) r[i] = series_from_json(j.at("series").at(kInterfaceNames[i]));
    r.check_invariants();
    return make_solution(cfg, j.at("c").get<double>(), r);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("malformed solution: ") + e.what());
  }
}

json to_json(const EPState& s) {
  return {{"a", s.a},
          {"c", s.c},
          {"rho_plus", to_json(s.rho_plus)},
          {"rho_minus", to_json(s.rho_minus)},
          {"u_plus", to_json(s.u_plus)},
          {"u_minus", to_json(s.u_minus)}};
}

json to_json(const EPResidual& r) {
  return {{"continuity_sup", r.continuity_sup},
          {"momentum_sup", r.momentum_sup},
          {"continuity_plus", to_json(r.continuity[0])},
          {"continuity_minus", to_json(r.continuity[1])},
          {"momentum_plus", to_json(r.momentum[0])},
          {"momentum_minus", to_json(r.momentum[1])}};
}

json to_json(const EPSpeeds& s) {
  return {{"c_minus", s.c_minus},
          {"c_plus", s.c_plus},
          {"factor_two_formula", s.factor_two_formula},
          {"factor_four_formula", s.factor_four_formula},
          {"matching_factor", s.matching_factor}};
}

void write_branch_csv(std::ostream& os, const Branch& branch, const NormParams& p) {
  os << "s,c,amp,norm_s_sigma,m1,m2,n_K\n";
  os << std::setprecision(17);
  for (const auto& pt : branch.points) {
    const WaveSolution& sol = pt.solution;
    os << branch.arm * pt.s << ',' << sol.c << ',' << sol.state[0].cos_coeff(1) << ','
       << norm(sol.state, p) << ',' << sol.monitors.m1 << ',' << sol.monitors.m2 << ','
       << compact_index(sol, p) << '\n';
  }
  os << "# termination: " << to_string(branch.termination);
  if (!branch.termination.detail.empty()) os << " (" << branch.termination.detail << ")";
  if (branch.termination.flags & kLoop) os << " period=" << branch.termination.period;
  os << '\n';
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,e_kin,e_pot,e_total,sup_r_plus_1,sup_r_plus_2,sup_r_minus_1,sup_r_minus_2\n";
  os << std::setprecision(17);
  for (const auto& rec : traj.log) {
    os << rec.t << ',' << rec.energy.e_kin << ',' << rec.energy.e_pot << ',' << rec.energy.e_total;
    for (double v : rec.sup) os << ',' << v;
    os << '\n';
  }
}

}  // namespace layerwave
