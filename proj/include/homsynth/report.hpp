#pragma once

#include <map>
#include <string>
#include <vector>

#include "homsynth/config.hpp"
#include "homsynth/recurrence.hpp"
#include "homsynth/synth.hpp"

namespace homsynth {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

enum class Outcome { JoinFound, JoinFoundWithAux, Partial, Failed };

const char* outcome_name(Outcome o);
Outcome outcome_from_name(const std::string& name);

struct SynthReport {
    std::string benchmark;
    Outcome outcome = Outcome::Failed;
    int aux_count = 0;
    std::vector<AuxAccumulator> aux;
    std::vector<std::pair<std::string, std::string>> join_equations;  // var, expr text
    std::string witness;          // empty when none
    std::string counterexample;   // empty when none
    std::string failure_reason;   // required for FAILED
    int verified_K = 0;
    std::int64_t domain_lo = 0;
    std::int64_t domain_hi = 0;
    bool oracle_ran = false;
    bool oracle_ok = false;
    std::vector<std::string> notes;
    std::map<std::string, double> phase_ms;
    SynthConfig config;
};

// JSON rendering; timings can be dropped for byte-stable comparisons.
std::string to_json(const SynthReport& report, bool include_timings = true);

int exit_code_for(Outcome o);

} // namespace homsynth
