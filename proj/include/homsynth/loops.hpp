#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "homsynth/parser.hpp"

namespace homsynth {

// One innermost loop, ready for modelling: body statements, variable
// classification and initial values taken from the assignments that
// dominate the loop.
struct LoopSpec {
    std::vector<StmtPtr> body;
    std::string iterator;
    std::string sequence;
    std::vector<std::string> state_vars;      // ordered
    std::set<std::string> input_vars;
    std::map<std::string, Expr> init;         // state var -> initial value
};

struct ExtractResult {
    std::vector<LoopSpec> loops;
    std::vector<std::string> skipped;  // loops with nested loops, reported
};

// Every innermost loop of the program, in source order.
// Throws NoLoopFound when the program has no loop at all.
ExtractResult extract_loops(const Program& p);

// SVar in body order of first assignment, IVar is everything else read by
// the body (always includes the sequence and the iterator).
std::pair<std::vector<std::string>, std::set<std::string>> classify_vars(const LoopSpec& loop);

} // namespace homsynth
