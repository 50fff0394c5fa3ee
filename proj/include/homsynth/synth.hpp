#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "homsynth/config.hpp"
#include "homsynth/recurrence.hpp"
#include "homsynth/rewrite.hpp"
#include "homsynth/sketch.hpp"

namespace homsynth {

// A verified constant-time join: one expression per state variable over the
// left/right-suffixed state variables and constants.
struct JoinOperator {
    std::vector<std::pair<std::string, Expr>> equations;
    int verified_K = 0;
    std::int64_t domain_lo = 0;
    std::int64_t domain_hi = 0;
};

std::string to_string(const JoinOperator& join);

struct VarSynthInfo {
    std::string var;
    std::string stage;  // "sketch", "hint", "relaxed"
    long candidates = 0;
    bool found = false;
};

struct SynthOutcome {
    bool ok = false;
    JoinOperator join;
    std::string failed_var;
    bool budget_exhausted = false;  // candidate budget hit (vs space exhausted)
    std::vector<VarSynthInfo> per_var;
};

// Streams sketch completions per state variable (size order), filters them
// through cached random examples, and accepts the first candidate that
// survives the exhaustive bounded check for that variable. Falls back per
// equation to the hint-shaped sketch (when provided) and then to a whole
// right-hand-side hole of depth 2.
SynthOutcome synthesize_join(const RecurrenceSystem& sys, const SynthConfig& cfg,
                             const std::map<std::string, NormalForm>* hints = nullptr);

// Evaluates a join expression over a pair of states (variables <v>_l, <v>_r).
Value eval_join_expr(const Expr& e, const StateVector& left, const StateVector& right);

} // namespace homsynth
