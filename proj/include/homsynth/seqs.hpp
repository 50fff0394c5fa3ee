#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace homsynth {

// All sequences with lengths in [min_len, max_len] over [lo, hi], length
// ascending then lexicographic. `cap`: when the full enumeration would
// exceed it, a seeded random sample of that size is returned instead
// (lengths drawn uniformly).
inline std::vector<std::vector<std::int64_t>> enumerate_sequences(
    std::int64_t lo, std::int64_t hi, int min_len, int max_len,
    std::size_t cap = 0, std::uint64_t seed = 1) {
    std::vector<std::vector<std::int64_t>> out;
    const std::int64_t width = hi - lo + 1;
    double total = 0;
    double pw = 1;
    for (int len = 0; len <= max_len; ++len) {
        if (len >= min_len) total += pw;
        pw *= static_cast<double>(width);
    }
    if (cap > 0 && total > static_cast<double>(cap)) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> len_dist(min_len, max_len);
        std::uniform_int_distribution<std::int64_t> val_dist(lo, hi);
        for (std::size_t n = 0; n < cap; ++n) {
            int len = len_dist(rng);
            std::vector<std::int64_t> s(static_cast<std::size_t>(len));
            for (auto& v : s) v = val_dist(rng);
            out.push_back(std::move(s));
        }
        return out;
    }
    for (int len = min_len; len <= max_len; ++len) {
        std::vector<std::int64_t> s(static_cast<std::size_t>(len), lo);
        for (;;) {
            out.push_back(s);
            int j = len - 1;
            for (; j >= 0; --j) {
                if (s[static_cast<std::size_t>(j)] < hi) {
                    ++s[static_cast<std::size_t>(j)];
                    for (int t = j + 1; t < len; ++t) s[static_cast<std::size_t>(t)] = lo;
                    break;
                }
            }
            if (j < 0) break;
        }
    }
    return out;
}

} // namespace homsynth
