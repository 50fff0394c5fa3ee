#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "homsynth/expr.hpp"
#include "homsynth/recurrence.hpp"

namespace homsynth {

// Lexicographic (max depth of tracked-variable occurrences, occurrence count).
// Depth counts binary and conditional nodes strictly above a leaf; unary
// operators and sequence indexing are transparent.
struct CostPair {
    int depth = 0;
    int count = 0;

    friend bool operator==(const CostPair& a, const CostPair& b) {
        return a.depth == b.depth && a.count == b.count;
    }
    friend bool operator!=(const CostPair& a, const CostPair& b) { return !(a == b); }
    friend bool operator<(const CostPair& a, const CostPair& b) {
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.count < b.count;
    }
    friend bool operator<=(const CostPair& a, const CostPair& b) { return a < b || a == b; }
};

CostPair cost(const Expr& e, const std::set<std::string>& vars);

// One `lhs ~> rhs [if cond]` line. Identifiers in the patterns are pattern
// variables. Rules whose left side compares a min/max against something are
// "splitting" rules: they may grow the expression as long as the cost does
// not increase and a tracked variable is involved.
struct RewriteRule {
    std::string text;
    Expr lhs;
    Expr rhs;
    Expr side;  // null when absent
    bool splitting = false;
};

struct RuleSet {
    std::vector<RewriteRule> rules;

    static RuleSet parse_catalog(const std::string& text);
    // Catalog shipped with the tool (data/rewrite_rules.txt, embedded at build
    // time).
    static const RuleSet& builtin();
};

const std::string& builtin_catalog_text();

// Constant folding, negation pushed to the leaves, >/>= oriented to </<=,
// and associative-commutative chains flattened and sorted with
// tracked-variable terms first.
Expr canonicalize(const Expr& e, const std::set<std::string>& tracked);

// Applies catalog rules until no rule lowers the cost (or keeps it while
// shrinking the term). Throws RuleBudgetExceeded past `budget` steps.
Expr rewrite_min_cost(const Expr& e, const RuleSet& rules, const std::set<std::string>& tracked,
                      int budget, int* steps_out = nullptr);

// One carved piece of the normal form: a maximal subtree holding exactly one
// start-state symbol at depth <= C.
struct NormalItem {
    Expr piece;
    std::string symbol;           // the sigma_0 symbol inside
    Expr remainder;               // piece minus the symbol; null when none
    BinOp connector = BinOp::Add; // operator that joined symbol and remainder
    bool has_remainder = false;
    bool identity_remainder = false;  // bare symbol under an AC parent
};

struct NormalForm {
    Expr rewritten;                 // whole expression after rewriting
    Expr skeleton;                  // rewritten with holes at the pieces
    std::vector<NormalItem> items;
    Expr rest;                      // rewritten with sigma_0 replaced by inits
};

// sigma_to_state maps each start-state symbol to its state variable.
// Returns nullopt when the expression cannot be decomposed (a start-state
// symbol inside a sequence index).
std::optional<NormalForm> normalize(const Expr& unfolded, const RecurrenceSystem& sys,
                                    const std::map<std::string, std::string>& sigma_to_state,
                                    const RuleSet& rules, int cost_bound, int budget);

Expr reassemble(const NormalForm& nf);

// Remainders in item order; entries for bare symbols under an AC parent carry
// the operator identity. Items with no remainder story (bare under a
// conditional) are omitted.
struct Remainder {
    Expr expr;
    BinOp connector;
    bool identity;
    std::string symbol;
};
std::vector<Remainder> collect(const NormalForm& nf);

} // namespace homsynth
