#pragma once

#include <chrono>
#include <cstdint>
#include <string>

#include "homsynth/errors.hpp"

namespace homsynth {

struct SynthConfig {
    int K = 3;                         // bounded-check operand length
    std::int64_t domain_lo = -2;
    std::int64_t domain_hi = 2;
    int max_hole_depth = 1;            // expression depth inside sketch holes
    long candidate_budget = 30'000'000;  // per equation, per search stage
    std::uint64_t seed = 12345;
    double timeout_sec = 300.0;
    int cost_bound = 1;                // C: state depth inside each normal-form piece
    int max_unfold = 5;
    int min_length = 0;                // skip operands shorter than this in checks
    int relaxed_max_size = 9;          // size cap for the whole-right-side fallback
    int rewrite_budget = 10'000;
    int filter_examples = 200;
    int filter_max_len = 8;
    int grain = 16;
    bool use_example_filter = true;

    std::chrono::steady_clock::time_point deadline{};
    bool has_deadline = false;

    void arm_deadline() {
        deadline = std::chrono::steady_clock::now() +
                   std::chrono::microseconds(static_cast<long long>(timeout_sec * 1e6));
        has_deadline = true;
    }
    void check_deadline(const char* phase) const {
        if (has_deadline && std::chrono::steady_clock::now() > deadline)
            throw TimeoutError(phase);
    }

    void validate() const {
        if (K < 2) throw ConfigError("K must be at least 2");
        if (max_hole_depth < 1) throw ConfigError("hole depth must be at least 1");
        if (domain_lo > domain_hi) throw ConfigError("empty scalar domain");
        if (cost_bound < 1) throw ConfigError("cost bound must be at least 1");
        if (max_unfold < 2) throw ConfigError("max unfold must be at least 2");
    }
};

} // namespace homsynth
