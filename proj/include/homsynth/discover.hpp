#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "homsynth/config.hpp"
#include "homsynth/recurrence.hpp"
#include "homsynth/rewrite.hpp"

namespace homsynth {

// Start-state symbols for unfolding: fresh symbol (var + "_0") -> state var.
std::map<std::string, std::string> sigma_symbols(const RecurrenceSystem& sys);

// k-fold self-substitution of the system from the start-state symbols, with
// the iterator shifted step by step (element j is read as s[i + j]).
// Pure substitution, no simplification.
Expr unfold(const RecurrenceSystem& sys, const std::string& target, int k);

enum class SolveFailure { None, NormalizeNull, MaxUnfoldExceeded, UpdateInference };

struct SolveReport {
    SolveFailure failure = SolveFailure::None;
    std::string detail;
    int fixpoint_k = 0;
    std::optional<NormalForm> last_nf;  // of the final unfolding, for sketch hints
};

// The Solve loop for one equation. Auxiliaries accumulate in `aux` (shared
// across the equations of one system). Returns false on failure.
bool solve_equation(const RecurrenceSystem& sys, std::size_t eq_index, const RuleSet& rules,
                    const SynthConfig& cfg, std::vector<AuxAccumulator>& aux,
                    SolveReport& report);

// Drops accumulators expressible over the remaining ones and the original
// state (greedy, insertion order, bounded pointwise equivalence); keeps any
// accumulator another kept update depends on.
std::vector<AuxAccumulator> remove_redundancies(const std::vector<AuxAccumulator>& aux,
                                                const RecurrenceSystem& sys,
                                                const SynthConfig& cfg);

struct DiscoveryOutcome {
    bool ok = false;
    std::vector<AuxAccumulator> aux;          // after redundancy removal
    std::string failed_equation;
    SolveFailure failure = SolveFailure::None;
    std::string detail;
    std::map<std::string, NormalForm> hints;  // per original state var
};

// Runs solve_equation over every original equation in order, then
// remove_redundancies. On failure the partial aux set is still reported.
DiscoveryOutcome extend_discovery(const RecurrenceSystem& sys, const RuleSet& rules,
                                  const SynthConfig& cfg);

} // namespace homsynth
