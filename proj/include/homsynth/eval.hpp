#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "homsynth/expr.hpp"

namespace homsynth {

// Concrete sentinel values for MAX_INT / MIN_INT. Large enough to dominate
// every value a benchmark can produce, small enough that sums with real
// values never overflow 64 bits.
constexpr std::int64_t kMaxIntSentinel = std::int64_t(1) << 61;
constexpr std::int64_t kMinIntSentinel = -(std::int64_t(1) << 61);

struct Value {
    Type type = Type::Int;
    std::int64_t i = 0;  // booleans stored as 0/1

    static Value of_int(std::int64_t v) { return Value{Type::Int, v}; }
    static Value of_bool(bool v) { return Value{Type::Bool, v ? 1 : 0}; }
    bool as_bool() const { return i != 0; }

    bool operator==(const Value& o) const { return type == o.type && i == o.i; }
    bool operator!=(const Value& o) const { return !(*this == o); }
};

std::string to_string(const Value& v);

// Evaluation environment: scalar bindings plus one sequence.
struct Env {
    std::map<std::string, Value> vars;
    const std::vector<std::int64_t>* seq = nullptr;
    std::string seq_name;

    std::optional<Value> lookup(const std::string& name) const {
        auto it = vars.find(name);
        if (it == vars.end()) return std::nullopt;
        return it->second;
    }
};

// Strict evaluation; Cond evaluates only the taken branch. Throws EvalError
// on unbound variables, out-of-range access, division by zero and overflow.
Value eval(const Expr& e, const Env& env);

// Checked arithmetic helpers shared with the synthesis hot path.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_sub(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_div(std::int64_t a, std::int64_t b);

} // namespace homsynth
