#pragma once

#include <optional>
#include <string>

#include "homsynth/config.hpp"
#include "homsynth/report.hpp"
#include "homsynth/rewrite.hpp"
#include "homsynth/synth.hpp"
#include "homsynth/verify.hpp"

namespace homsynth {

struct PipelineResult {
    SynthReport report;
    RecurrenceSystem system;            // extended system when auxiliaries were added
    std::optional<JoinOperator> join;
    std::string proof_text;             // empty unless a join was found
    std::string skeleton_text;
};

// parse -> model -> join synthesis -> (on failure) witness, extension,
// re-synthesis with hints -> bounded verification -> oracle -> emissions.
PipelineResult run_pipeline(const std::string& source, const std::string& benchmark_name,
                            SynthConfig cfg, const RuleSet& rules = RuleSet::builtin());

PipelineResult run_pipeline_file(const std::string& path, SynthConfig cfg,
                                 const RuleSet& rules = RuleSet::builtin());

// Two-part skeleton: readable divide-and-conquer plan plus a machine block
// whose expressions round-trip through the expression parser.
std::string emit_skeleton(const RecurrenceSystem& sys, const JoinOperator& join,
                          const SynthConfig& cfg);

} // namespace homsynth
