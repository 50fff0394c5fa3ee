#pragma once

#include <optional>
#include <string>
#include <vector>

#include "homsynth/config.hpp"
#include "homsynth/recurrence.hpp"
#include "homsynth/synth.hpp"

namespace homsynth {

struct Counterexample {
    std::vector<std::int64_t> x, y;
    StateVector lhs;  // f(x . y)
    StateVector rhs;  // join(f(x), f(y))
};

std::string to_string(const Counterexample& cex);

// Exhaustive check of f(x . y) == join(f(x), f(y)) over all operand pairs of
// length min_length..K from the domain. Returns the first failing pair in
// enumeration order (length ascending, then lexicographic), or nothing.
std::optional<Counterexample> bounded_check(const RecurrenceSystem& sys,
                                            const JoinOperator& join, const SynthConfig& cfg);

struct NonHomWitness {
    std::vector<std::int64_t> x, y, v, w;
    StateVector fx, fy;        // == f(v), f(w)
    StateVector fxy, fvw;      // differ
};

std::string to_string(const NonHomWitness& w);

// Searches bounded sequences for equal-state pairs whose concatenations
// disagree; such a witness rules out any join over the current state.
std::optional<NonHomWitness> witness_nonhomomorphism(const RecurrenceSystem& sys,
                                                     const SynthConfig& cfg, int max_len);

enum class SplitStrategy { Balanced, Random, All };

// Divide-and-conquer evaluation: halve until <= grain, run the sequential
// fold on leaves, combine with the join. With SplitStrategy::All every split
// point is evaluated and checked for agreement (throws EvalError on
// disagreement).
StateVector dc_eval(const RecurrenceSystem& sys, const JoinOperator& join,
                    const std::vector<std::int64_t>& input, int grain, SplitStrategy split,
                    std::uint64_t seed = 1);

StateVector apply_join(const JoinOperator& join, const StateVector& left,
                       const StateVector& right);

// Oracle agreement: dc_eval equals run_sequential on `trials` seeded random
// sequences up to max_len, for balanced and random splits. Returns a message
// for the first disagreement.
std::optional<std::string> oracle_agreement(const RecurrenceSystem& sys,
                                            const JoinOperator& join, const SynthConfig& cfg,
                                            int trials, int max_len, std::int64_t lo,
                                            std::int64_t hi);

// Split-independence: dc_eval is identical across all split points for every
// sequence up to max_len over the domain.
std::optional<std::string> split_independence(const RecurrenceSystem& sys,
                                              const JoinOperator& join, const SynthConfig& cfg,
                                              int max_len);

} // namespace homsynth
