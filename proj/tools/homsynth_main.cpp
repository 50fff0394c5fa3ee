#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "homsynth/corpus.hpp"
#include "homsynth/pipeline.hpp"

namespace fs = std::filesystem;
using namespace homsynth;

namespace {

struct CliOptions {
    std::string file;
    std::string corpus_dir;
    SynthConfig cfg;
    std::string domain = "";
    std::string emit = "report";
    std::string out_dir = "";
    std::string rules_file = "";
    int jobs = 4;
};

void parse_domain(const std::string& text, SynthConfig& cfg) {
    auto dots = text.find("..");
    if (dots == std::string::npos)
        throw CLI::ValidationError("--domain expects LO..HI");
    cfg.domain_lo = std::stoll(text.substr(0, dots));
    cfg.domain_hi = std::stoll(text.substr(dots + 2));
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

int emit_outputs(const PipelineResult& res, const CliOptions& opt) {
    bool want_report = opt.emit == "report" || opt.emit == "all";
    bool want_dafny = opt.emit == "dafny" || opt.emit == "all";
    bool want_skeleton = opt.emit == "skeleton" || opt.emit == "all";

    if (opt.out_dir.empty()) {
        if (want_report) std::cout << to_json(res.report) << "\n";
        if (want_dafny && !res.proof_text.empty()) std::cout << res.proof_text;
        if (want_skeleton && !res.skeleton_text.empty()) std::cout << res.skeleton_text;
    } else {
        fs::create_directories(opt.out_dir);
        fs::path base = fs::path(opt.out_dir) / res.report.benchmark;
        if (want_report) write_file(base.string() + ".report.json", to_json(res.report) + "\n");
        if (want_dafny && !res.proof_text.empty())
            write_file(base.string() + ".dfy", res.proof_text);
        if (want_skeleton && !res.skeleton_text.empty())
            write_file(base.string() + ".skeleton.txt", res.skeleton_text);
        std::cout << res.report.benchmark << ": " << outcome_name(res.report.outcome) << "\n";
    }
    return exit_code_for(res.report.outcome);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"homsynth: synthesizes divide-and-conquer join operators for single-pass loops"};
    app.require_subcommand(0, 1);

    CliOptions opt;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--bound", opt.cfg.K, "operand length bound K for bounded checking");
        cmd->add_option("--domain", opt.domain, "scalar domain LO..HI");
        cmd->add_option("--hole-depth", opt.cfg.max_hole_depth, "expression depth inside holes");
        cmd->add_option("--max-unfold", opt.cfg.max_unfold, "unfolding limit for discovery");
        cmd->add_option("--cost-bound", opt.cfg.cost_bound, "normal form cost bound C");
        cmd->add_option("--budget", opt.cfg.candidate_budget, "candidate budget per equation");
        cmd->add_option("--seed", opt.cfg.seed, "random seed");
        cmd->add_option("--timeout", opt.cfg.timeout_sec, "per-benchmark timeout in seconds");
        cmd->add_option("--grain", opt.cfg.grain, "leaf size of the emitted plan");
        cmd->add_option("--min-length", opt.cfg.min_length, "minimum operand length in checks");
        cmd->add_option("--emit", opt.emit, "report|dafny|skeleton|all")
            ->check(CLI::IsMember({"report", "dafny", "skeleton", "all"}));
        cmd->add_option("--out", opt.out_dir, "output directory (default: stdout)");
        cmd->add_option("--rules", opt.rules_file, "rewrite rule catalog file");
        cmd->add_option("--jobs", opt.jobs, "parallel benchmarks in corpus mode");
    };

    app.add_option("file", opt.file, "a .loop program");
    add_common(&app);
    CLI::App* corpus = app.add_subcommand("corpus", "run a benchmark directory");
    corpus->add_option("dir", opt.corpus_dir, "directory of .loop files with .meta sidecars")
        ->required();
    add_common(corpus);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!opt.domain.empty()) parse_domain(opt.domain, opt.cfg);

        RuleSet rules = RuleSet::builtin();
        if (!opt.rules_file.empty()) {
            std::ifstream in(opt.rules_file);
            if (!in) throw Error("cannot open rules file " + opt.rules_file);
            std::ostringstream buf;
            buf << in.rdbuf();
            rules = RuleSet::parse_catalog(buf.str());
        }

        if (corpus->parsed()) {
            CorpusSummary summary = run_corpus(opt.corpus_dir, opt.cfg, opt.jobs, rules);
            std::cout << summary_table(summary);
            if (!opt.out_dir.empty()) {
                fs::create_directories(opt.out_dir);
                for (const auto& e : summary.entries)
                    write_file(fs::path(opt.out_dir) / (e.meta.name + ".report.json"),
                               to_json(e.report) + "\n");
            }
            return summary.all_matched ? 0 : 1;
        }

        if (opt.file.empty()) {
            std::cerr << app.help();
            return 2;
        }
        PipelineResult res = run_pipeline_file(opt.file, opt.cfg, rules);
        return emit_outputs(res, opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
