#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "homsynth/eval.hpp"
#include "homsynth/expr.hpp"

namespace homsynth {

struct EquivWitness {
    Env env;
    std::string note;
};

// Semantic equality of two expressions over the given scalar variables:
// exhaustive when |domain|^(vars) is small, otherwise `trials` seeded random
// environments. Environments also bind a sequence when the expressions read
// one (elements drawn from the same domain, lengths up to `max_seq_len`).
// An evaluation error on one side counts as inequality unless both sides
// fail on that environment.
bool equivalent(const Expr& e1, const Expr& e2,
                std::int64_t domain_lo, std::int64_t domain_hi,
                const std::vector<std::string>& vars,
                int trials, std::uint64_t seed,
                int max_seq_len = 4,
                EquivWitness* witness = nullptr);

// Variant with explicit variable types (booleans range over {false,true}).
bool equivalent_typed(const Expr& e1, const Expr& e2,
                      std::int64_t domain_lo, std::int64_t domain_hi,
                      const std::vector<std::pair<std::string, Type>>& vars,
                      int trials, std::uint64_t seed,
                      int max_seq_len = 4,
                      EquivWitness* witness = nullptr);

} // namespace homsynth
