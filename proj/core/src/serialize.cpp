#include "varbound/serialize.hpp"

namespace varbound {

void to_json(nlohmann::json& j, const MomentAccumulator& acc) {
  j = {{"count", acc.count()}, {"mean", acc.mean()}, {"m2", acc.m2()}};
}

void from_json(const nlohmann::json& j, MomentAccumulator& acc) {
  acc = MomentAccumulator::from_state(j.at("count").get<std::uint64_t>(),
                                      j.at("mean").get<double>(), j.at("m2").get<double>());
}

void to_json(nlohmann::json& j, const BoundResult& r) {
  j = {{"bound", r.bound}, {"observed", r.observed}, {"slack", r.slack}, {"satisfied", r.satisfied}};
}

void from_json(const nlohmann::json& j, BoundResult& r) {
  j.at("bound").get_to(r.bound);
  j.at("observed").get_to(r.observed);
  j.at("slack").get_to(r.slack);
  r.satisfied = j.value("satisfied", false);
}

void to_json(nlohmann::json& j, const DataSummary& s) {
  j = {{"n", s.n}, {"mean", s.mean}, {"variance", s.variance}};
  j["min"] = s.min ? nlohmann::json(*s.min) : nlohmann::json(nullptr);
  j["max"] = s.max ? nlohmann::json(*s.max) : nlohmann::json(nullptr);
}

void to_json(nlohmann::json& j, const Verdict& v) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& item : v.violations) {
    violations.push_back({{"constraint", item.constraint},
                          {"bound", item.result.bound},
                          {"observed", item.result.observed},
                          {"slack", item.result.slack}});
  }
  j = {{"feasible", v.feasible}, {"violations", violations}, {"tolerance_used", v.tolerance_used}};
}

void from_json(const nlohmann::json& j, Verdict& v) {
  j.at("feasible").get_to(v.feasible);
  j.at("tolerance_used").get_to(v.tolerance_used);
  v.violations.clear();
  for (const auto& item : j.at("violations")) {
    BoundResult r;
    item.at("bound").get_to(r.bound);
    item.at("observed").get_to(r.observed);
    item.at("slack").get_to(r.slack);
    r.satisfied = false;
    v.violations.push_back({item.at("constraint").get<std::string>(), r});
  }
  v.checks = v.violations;
}

void to_json(nlohmann::json& j, const DriftReport& r) {
  j = {{"mean_rel_error", r.mean_rel_error},
       {"m2_rel_error", r.m2_rel_error},
       {"worst_case_over_trials", r.worst_case_over_trials},
       {"trials", r.trials},
       {"mean_spread", r.mean_spread},
       {"m2_spread", r.m2_spread}};
}

void from_json(const nlohmann::json& j, DriftReport& r) {
  j.at("mean_rel_error").get_to(r.mean_rel_error);
  j.at("m2_rel_error").get_to(r.m2_rel_error);
  j.at("worst_case_over_trials").get_to(r.worst_case_over_trials);
  j.at("trials").get_to(r.trials);
  r.mean_spread = j.value("mean_spread", 0.0);
  r.m2_spread = j.value("m2_spread", 0.0);
}

}  // namespace varbound
