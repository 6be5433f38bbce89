#pragma once

// JSON snapshots and CSV tables for the library's result types.

#include <nlohmann/json.hpp>
#include <ostream>

#include "layerwave/continuation.hpp"
#include "layerwave/dynamics.hpp"
#include "layerwave/eulerpoisson.hpp"
#include "layerwave/localbranch.hpp"
#include "layerwave/pencil.hpp"
#include "layerwave/spectral.hpp"
#include "layerwave/steady.hpp"

namespace layerwave {

using nlohmann::json;

json to_json(const TrigSeries& f);
TrigSeries series_from_json(const json& j);

json to_json(const OffsetSeries& f);
json to_json(const SpeedSet& s);
json to_json(const LocalExpansion& loc);
json to_json(const WaveSolution& sol);
json to_json(const EPState& s);
json to_json(const EPResidual& r);
json to_json(const EPSpeeds& s);

/// Inverse of to_json(WaveSolution).
WaveSolution solution_from_json(const json& j);

/// Columns s, c, amp, norm_s_sigma, m1, m2, n_K; `amp` is the first cosine
/// coefficient of the lower ion interface. Ends with a comment line holding
/// the termination status.
void write_branch_csv(std::ostream& os, const Branch& branch, const NormParams& p);

/// Columns t, e_kin, e_pot, e_total and the sup-norm of each interface.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace layerwave
