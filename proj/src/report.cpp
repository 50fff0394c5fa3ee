#include "homsynth/report.hpp"

#include <json.hpp>

#include "homsynth/errors.hpp"

namespace homsynth {

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::JoinFound: return "JOIN_FOUND";
        case Outcome::JoinFoundWithAux: return "JOIN_FOUND_WITH_AUX";
        case Outcome::Partial: return "PARTIAL";
        case Outcome::Failed: return "FAILED";
    }
    return "FAILED";
}

Outcome outcome_from_name(const std::string& name) {
    if (name == "JOIN_FOUND") return Outcome::JoinFound;
    if (name == "JOIN_FOUND_WITH_AUX") return Outcome::JoinFoundWithAux;
    if (name == "PARTIAL") return Outcome::Partial;
    if (name == "FAILED") return Outcome::Failed;
    throw ConfigError("unknown outcome name: " + name);
}

int exit_code_for(Outcome o) {
    switch (o) {
        case Outcome::JoinFound:
        case Outcome::JoinFoundWithAux:
        case Outcome::Partial:
            return 0;
        case Outcome::Failed:
            return 1;
    }
    return 2;
}

std::string to_json(const SynthReport& r, bool include_timings) {
    nlohmann::ordered_json j;
    j["schema"] = kReportSchema;
    j["tool_version"] = kToolVersion;
    j["benchmark"] = r.benchmark;
    j["outcome"] = outcome_name(r.outcome);
    j["aux_count"] = r.aux_count;
    nlohmann::ordered_json aux = nlohmann::ordered_json::array();
    for (const auto& a : r.aux) {
        nlohmann::ordered_json one;
        one["name"] = a.name;
        one["init"] = to_string(a.init);
        one["update"] = to_string(a.update);
        one["origin"] = a.origin ? to_string(a.origin) : "";
        aux.push_back(one);
    }
    j["aux"] = aux;
    nlohmann::ordered_json join = nlohmann::ordered_json::object();
    for (const auto& [v, e] : r.join_equations) join[v] = e;
    j["join"] = join;
    j["witness"] = r.witness.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(r.witness);
    j["counterexample"] =
        r.counterexample.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(r.counterexample);
    if (r.outcome == Outcome::Failed || r.outcome == Outcome::Partial)
        j["reason"] = r.failure_reason;
    nlohmann::ordered_json verified;
    verified["K"] = r.verified_K;
    verified["domain"] = std::to_string(r.domain_lo) + ".." + std::to_string(r.domain_hi);
    j["verified"] = verified;
    j["oracle"] = r.oracle_ran ? nlohmann::ordered_json(r.oracle_ok) : nlohmann::ordered_json();
    j["notes"] = r.notes;
    if (include_timings) {
        nlohmann::ordered_json t;
        for (const auto& [k, v] : r.phase_ms) t[k] = v;
        j["timings_ms"] = t;
    }
    nlohmann::ordered_json cfg;
    cfg["K"] = r.config.K;
    cfg["domain"] =
        std::to_string(r.config.domain_lo) + ".." + std::to_string(r.config.domain_hi);
    cfg["hole_depth"] = r.config.max_hole_depth;
    cfg["cost_bound"] = r.config.cost_bound;
    cfg["max_unfold"] = r.config.max_unfold;
    cfg["budget"] = r.config.candidate_budget;
    cfg["seed"] = r.config.seed;
    cfg["timeout_sec"] = r.config.timeout_sec;
    cfg["min_length"] = r.config.min_length;
    j["config"] = cfg;
    return j.dump(2);
}

} // namespace homsynth
