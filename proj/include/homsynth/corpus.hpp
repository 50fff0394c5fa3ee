#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "homsynth/pipeline.hpp"

namespace homsynth {

// One `.meta` sidecar per benchmark: `key: value` lines.
// Keys: name, expect_outcome, expect_aux (comma-separated alternatives),
// domain (LO..HI), K, min_length, note.
struct BenchmarkMeta {
    std::string name;
    std::optional<Outcome> expect_outcome;
    std::set<int> expect_aux;  // empty set = unchecked
    std::optional<std::int64_t> domain_lo, domain_hi;
    std::optional<int> K;
    std::optional<int> min_length;
    std::string note;
};

BenchmarkMeta parse_meta(const std::string& text);
SynthConfig apply_meta(const BenchmarkMeta& meta, SynthConfig cfg);

struct CorpusEntry {
    std::string file;
    BenchmarkMeta meta;
    SynthReport report;
    bool matched = true;
    std::string mismatch;
};

struct CorpusSummary {
    std::vector<CorpusEntry> entries;
    bool all_matched = true;
    double total_ms = 0;
};

// Runs every `.loop` file under `dir` (up to `jobs` in parallel), compares
// outcomes and auxiliary counts against the sidecar expectations.
CorpusSummary run_corpus(const std::string& dir, const SynthConfig& base, int jobs,
                         const RuleSet& rules = RuleSet::builtin());

std::string summary_table(const CorpusSummary& summary);

} // namespace homsynth
