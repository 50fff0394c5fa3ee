#pragma once

#include <string>
#include <vector>

#include "homsynth/recurrence.hpp"
#include "homsynth/synth.hpp"

namespace homsynth {

// Topological order of the join dependency graph: v depends on u when u
// appears (left- or right-suffixed) in v's join equation, u != v.
// Throws CyclicDependency.
std::vector<std::string> proof_dependency_order(const JoinOperator& join);

struct ProofResult {
    std::string text;
    std::vector<std::string> skipped;  // variables with no rendering, with reasons
};

// Induction proof text: one recursive function per state variable, one join
// function, and one homomorphism lemma each, in dependency order. The lemma
// skeleton is shared: base case asserts s + [] == s, the step peels the last
// element of t and recalls the lemmas of the variables read by the join
// equation.
ProofResult emit_proof(const RecurrenceSystem& sys, const JoinOperator& join);

} // namespace homsynth
