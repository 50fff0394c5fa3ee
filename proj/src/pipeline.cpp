#include "homsynth/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "homsynth/discover.hpp"
#include "homsynth/errors.hpp"
#include "homsynth/proof.hpp"

namespace homsynth {

namespace {

class PhaseTimer {
public:
    explicit PhaseTimer(std::map<std::string, double>& sink) : sink_(sink) {}

    template <typename F>
    auto time(const std::string& name, F&& f) -> decltype(f()) {
        auto start = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(f())>) {
            f();
            record(name, start);
        } else {
            auto result = f();
            record(name, start);
            return result;
        }
    }

private:
    void record(const std::string& name, std::chrono::steady_clock::time_point start) {
        auto ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        sink_[name] += ms;
    }
    std::map<std::string, double>& sink_;
};

// Structural rendering of the Theorem-6.2-style property: the join equation
// of an original state variable should not read a left-suffixed auxiliary.
void check_original_joins(const RecurrenceSystem& ext, const JoinOperator& join,
                          std::vector<std::string>& notes) {
    std::set<std::string> aux_names(ext.state_vars.begin() + static_cast<long>(ext.original_count),
                                    ext.state_vars.end());
    for (std::size_t i = 0; i < ext.original_count && i < join.equations.size(); ++i) {
        const auto& [v, rhs] = join.equations[i];
        for (const auto& name : free_vars(rhs)) {
            if (name.size() > 2 && name.compare(name.size() - 2, 2, "_l") == 0 &&
                aux_names.count(name.substr(0, name.size() - 2))) {
                notes.push_back("join for original variable " + v +
                                " reads left auxiliary " + name);
            }
        }
    }
}

} // namespace

std::string emit_skeleton(const RecurrenceSystem& sys, const JoinOperator& join,
                          const SynthConfig& cfg) {
    std::ostringstream os;
    os << "divide-and-conquer plan\n";
    os << "=======================\n\n";
    os << "split:   recursively halve the input sequence (grain " << cfg.grain << ")\n\n";
    os << "leaf (sequential loop over the chunk):\n";
    os << "  init:\n";
    for (const auto& v : sys.state_vars)
        os << "    " << v << " = " << to_string(sys.init.at(v)) << "\n";
    os << "  per element " << sys.sequence << "[" << sys.iterator << "]:\n";
    for (const auto& [v, rhs] : sys.equations)
        os << "    " << v << " = " << to_string(rhs) << "\n";
    os << "\ncombine (join of two chunk states):\n";
    for (const auto& [v, rhs] : join.equations)
        os << "  " << v << " = " << to_string(rhs) << "\n";
    os << "\nmachine block:\n";

    nlohmann::ordered_json j;
    j["schema"] = kReportSchema;
    j["grain"] = cfg.grain;
    j["iterator"] = sys.iterator;
    j["sequence"] = sys.sequence;
    nlohmann::ordered_json init, leaf, combine;
    for (const auto& v : sys.state_vars) init[v] = to_string(sys.init.at(v));
    for (const auto& [v, rhs] : sys.equations) leaf[v] = to_string(rhs);
    for (const auto& [v, rhs] : join.equations) combine[v] = to_string(rhs);
    j["init"] = init;
    j["leaf"] = leaf;
    j["join"] = combine;
    os << j.dump(2) << "\n";
    return os.str();
}

PipelineResult run_pipeline(const std::string& source, const std::string& benchmark_name,
                            SynthConfig cfg, const RuleSet& rules) {
    cfg.validate();
    cfg.arm_deadline();

    PipelineResult res;
    SynthReport& report = res.report;
    report.benchmark = benchmark_name;
    report.config = cfg;
    PhaseTimer timer(report.phase_ms);

    // ---- parse and model
    RecurrenceSystem raw = timer.time("parse", [&] {
        Program prog = parse_program(source);
        ExtractResult loops = extract_loops(prog);
        if (loops.loops.empty()) throw NoLoopFound();
        for (const auto& s : loops.skipped) report.notes.push_back(s);
        if (loops.loops.size() > 1)
            report.notes.push_back("multiple loops; parallelizing the first");
        return to_recurrence_system(loops.loops.front());
    });
    res.system = raw;

    // ---- join synthesis on the raw system
    SynthOutcome first = timer.time("join_synthesis", [&] { return synthesize_join(raw, cfg); });

    RecurrenceSystem final_sys = raw;
    std::optional<SynthOutcome> final_synth;
    if (first.ok) {
        report.outcome = Outcome::JoinFound;
        final_synth = first;
    } else {
        // witness for the report, then extension, then one retry
        timer.time("witness_search", [&] {
            auto w = witness_nonhomomorphism(raw, cfg, std::min(cfg.K + 1, 4));
            if (w) report.witness = to_string(*w);
        });
        DiscoveryOutcome disc =
            timer.time("aux_discovery", [&] { return extend_discovery(raw, rules, cfg); });
        for (const auto& a : disc.aux) report.aux.push_back(a);
        report.aux_count = static_cast<int>(disc.aux.size());
        if (!disc.ok) {
            report.outcome = disc.aux.empty() ? Outcome::Failed : Outcome::Partial;
            report.failure_reason = "auxiliary discovery failed at equation " +
                                    disc.failed_equation + ": " + disc.detail;
        } else {
            final_sys = extend_system(raw, disc.aux);
            SynthOutcome second = timer.time("join_resynthesis", [&] {
                return synthesize_join(final_sys, cfg, &disc.hints);
            });
            if (second.ok) {
                report.outcome =
                    disc.aux.empty() ? Outcome::JoinFound : Outcome::JoinFoundWithAux;
                final_synth = second;
            } else {
                report.outcome = disc.aux.empty() ? Outcome::Failed : Outcome::Partial;
                report.failure_reason =
                    "no join for " + second.failed_var +
                    (second.budget_exhausted ? " (candidate budget exhausted)"
                                             : " (search space exhausted)");
            }
        }
    }
    res.system = final_sys;

    // ---- verification, oracle, emissions
    if (final_synth) {
        res.join = final_synth->join;
        auto cex = timer.time("bounded_check", [&] {
            return bounded_check(final_sys, *res.join, cfg);
        });
        if (cex) {
            // the synthesis-internal check should have prevented this
            report.outcome = Outcome::Failed;
            report.counterexample = to_string(*cex);
            report.failure_reason = "bounded verification rejected the join";
            res.join.reset();
        } else {
            res.join->verified_K = cfg.K;
            res.join->domain_lo = cfg.domain_lo;
            res.join->domain_hi = cfg.domain_hi;
            report.verified_K = cfg.K;
            report.domain_lo = cfg.domain_lo;
            report.domain_hi = cfg.domain_hi;
            for (const auto& [v, e] : res.join->equations)
                report.join_equations.emplace_back(v, to_string(e));
            check_original_joins(final_sys, *res.join, report.notes);

            timer.time("oracle", [&] {
                std::int64_t lo = std::min<std::int64_t>(cfg.domain_lo, -10);
                std::int64_t hi = std::max<std::int64_t>(cfg.domain_hi, 10);
                auto bad = oracle_agreement(final_sys, *res.join, cfg, 500, 200, lo, hi);
                report.oracle_ran = true;
                report.oracle_ok = !bad.has_value();
                if (bad) report.notes.push_back("oracle disagreement: " + *bad);
            });
            timer.time("proof", [&] {
                ProofResult proof = emit_proof(final_sys, *res.join);
                res.proof_text = proof.text;
                for (const auto& s : proof.skipped)
                    report.notes.push_back("proof skipped for " + s);
            });
            timer.time("skeleton", [&] {
                res.skeleton_text = emit_skeleton(final_sys, *res.join, cfg);
            });
        }
    }

    if (report.outcome == Outcome::Failed && report.failure_reason.empty())
        report.failure_reason = "no join found";
    return res;
}

PipelineResult run_pipeline_file(const std::string& path, SynthConfig cfg,
                                 const RuleSet& rules) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string name = path;
    auto slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    auto dot = name.rfind(".loop");
    if (dot != std::string::npos) name = name.substr(0, dot);
    return run_pipeline(buf.str(), name, cfg, rules);
}

} // namespace homsynth
