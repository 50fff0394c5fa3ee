#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "homsynth/eval.hpp"
#include "homsynth/expr.hpp"
#include "homsynth/loops.hpp"

namespace homsynth {

// A discovered auxiliary accumulator: one extra scalar equation appended to
// the loop. `update` may read the accumulator itself, input vars, earlier
// accumulators and (read-only) the original state.
struct AuxAccumulator {
    std::string name;
    Expr init;
    Expr update;
    Expr origin;  // the remainder it covers, for reporting
};

// One equation per state variable, applied simultaneously each step.
struct RecurrenceSystem {
    std::vector<std::pair<std::string, Expr>> equations;  // SVar order
    std::vector<std::string> state_vars;                  // same order
    std::set<std::string> input_vars;
    std::map<std::string, Expr> init;
    std::string iterator;
    std::string sequence;
    std::size_t original_count = 0;  // equations beyond this index are auxiliaries

    const Expr& rhs(const std::string& v) const;
    bool is_state(const std::string& v) const;
    Type state_type(const std::string& v) const;  // from init expression
};

struct StateVector {
    std::vector<std::string> names;
    std::vector<Value> values;

    Value get(const std::string& name) const;
    bool operator==(const StateVector& o) const { return names == o.names && values == o.values; }
    bool operator!=(const StateVector& o) const { return !(*this == o); }
};

std::string to_string(const StateVector& s);

// Appendix-style conversion: statements to one simultaneous equation per
// state variable, conditionals merged variable-wise into conditional
// expressions.
RecurrenceSystem to_recurrence_system(const LoopSpec& loop);

// Left fold of the equations over `input`, starting from the initial values.
StateVector run_sequential(const RecurrenceSystem& sys, const std::vector<std::int64_t>& input);

// Same fold but starting from an arbitrary state.
StateVector run_from_state(const RecurrenceSystem& sys, const StateVector& start,
                           const std::vector<std::int64_t>& input);

StateVector initial_state(const RecurrenceSystem& sys);

// Appends auxiliary equations after the originals. Throws NameClash.
RecurrenceSystem extend_system(const RecurrenceSystem& sys,
                               const std::vector<AuxAccumulator>& aux);

// Debug dump, one `v = expr` line per equation.
std::string dump(const RecurrenceSystem& sys);

// Statement-level interpreter for a loop body over one element; independent
// of the recurrence conversion, used as its oracle in tests.
StateVector interpret_loop(const LoopSpec& loop, const std::vector<std::int64_t>& input);

} // namespace homsynth
