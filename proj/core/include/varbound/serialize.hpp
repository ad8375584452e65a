#pragma once

#include <nlohmann/json.hpp>

#include "varbound/audit.hpp"
#include "varbound/bounds.hpp"
#include "varbound/moments.hpp"
#include "varbound/shard.hpp"

// JSON encodings used by the CLI and the shard harness.
//
//   MomentAccumulator  {"count", "mean", "m2"}
//   BoundResult        {"bound", "observed", "slack", "satisfied"}
//   Verdict            {"feasible", "violations": [{"constraint", "bound",
//                       "observed", "slack"}], "tolerance_used"}
//   DriftReport        {"mean_rel_error", "m2_rel_error",
//                       "worst_case_over_trials", "trials", "mean_spread",
//                       "m2_spread"}
//
// Doubles are written in shortest round-trip form.

namespace varbound {

void to_json(nlohmann::json& j, const MomentAccumulator& acc);
void from_json(const nlohmann::json& j, MomentAccumulator& acc);

void to_json(nlohmann::json& j, const BoundResult& r);
void from_json(const nlohmann::json& j, BoundResult& r);

void to_json(nlohmann::json& j, const DataSummary& s);

void to_json(nlohmann::json& j, const Verdict& v);
void from_json(const nlohmann::json& j, Verdict& v);

void to_json(nlohmann::json& j, const DriftReport& r);
void from_json(const nlohmann::json& j, DriftReport& r);

}  // namespace varbound
