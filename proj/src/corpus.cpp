#include "homsynth/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "homsynth/errors.hpp"

namespace homsynth {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

BenchmarkMeta parse_meta(const std::string& text) {
    BenchmarkMeta meta;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto colon = t.find(':');
        if (colon == std::string::npos) throw ConfigError("bad meta line: " + t);
        std::string key = trim(t.substr(0, colon));
        std::string val = trim(t.substr(colon + 1));
        if (key == "name") {
            meta.name = val;
        } else if (key == "expect_outcome") {
            meta.expect_outcome = outcome_from_name(val);
        } else if (key == "expect_aux") {
            std::istringstream vs(val);
            std::string tok;
            while (std::getline(vs, tok, ','))
                meta.expect_aux.insert(std::stoi(trim(tok)));
        } else if (key == "domain") {
            auto dots = val.find("..");
            if (dots == std::string::npos) throw ConfigError("bad domain: " + val);
            meta.domain_lo = std::stoll(trim(val.substr(0, dots)));
            meta.domain_hi = std::stoll(trim(val.substr(dots + 2)));
        } else if (key == "K") {
            meta.K = std::stoi(val);
        } else if (key == "min_length") {
            meta.min_length = std::stoi(val);
        } else if (key == "note") {
            meta.note = val;
        } else {
            throw ConfigError("unknown meta key: " + key);
        }
    }
    return meta;
}

SynthConfig apply_meta(const BenchmarkMeta& meta, SynthConfig cfg) {
    if (meta.domain_lo) cfg.domain_lo = *meta.domain_lo;
    if (meta.domain_hi) cfg.domain_hi = *meta.domain_hi;
    if (meta.K) cfg.K = *meta.K;
    if (meta.min_length) cfg.min_length = *meta.min_length;
    return cfg;
}

CorpusSummary run_corpus(const std::string& dir, const SynthConfig& base, int jobs,
                         const RuleSet& rules) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".loop") files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());

    CorpusSummary summary;
    summary.entries.resize(files.size());
    auto started = std::chrono::steady_clock::now();

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= files.size()) return;
            CorpusEntry& entry = summary.entries[i];
            entry.file = files[i];
            std::string stem = fs::path(files[i]).stem().string();
            entry.meta.name = stem;
            try {
                fs::path meta_path = fs::path(files[i]).replace_extension(".meta");
                if (fs::exists(meta_path)) {
                    std::ifstream min(meta_path);
                    std::ostringstream buf;
                    buf << min.rdbuf();
                    BenchmarkMeta parsed = parse_meta(buf.str());
                    if (parsed.name.empty()) parsed.name = stem;
                    entry.meta = parsed;
                }
                SynthConfig cfg = apply_meta(entry.meta, base);
                std::ifstream in(files[i]);
                std::ostringstream buf;
                buf << in.rdbuf();
                PipelineResult res = run_pipeline(buf.str(), entry.meta.name, cfg, rules);
                entry.report = res.report;
            } catch (const std::exception& e) {
                entry.report.benchmark = entry.meta.name;
                entry.report.outcome = Outcome::Failed;
                entry.report.failure_reason = std::string("tool error: ") + e.what();
            }
            if (entry.meta.expect_outcome && entry.report.outcome != *entry.meta.expect_outcome) {
                entry.matched = false;
                entry.mismatch = std::string("expected ") +
                                 outcome_name(*entry.meta.expect_outcome) + ", got " +
                                 outcome_name(entry.report.outcome);
            } else if (!entry.meta.expect_aux.empty() &&
                       !entry.meta.expect_aux.count(entry.report.aux_count)) {
                entry.matched = false;
                std::string want;
                for (int n : entry.meta.expect_aux) want += (want.empty() ? "" : "|") + std::to_string(n);
                entry.mismatch = "expected " + want + " auxiliaries, got " +
                                 std::to_string(entry.report.aux_count);
            }
        }
    };

    int n_workers = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int t = 0; t < n_workers - 1; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    summary.total_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - started)
                           .count();
    summary.all_matched = true;
    for (const auto& e : summary.entries)
        if (!e.matched) summary.all_matched = false;
    return summary;
}

std::string summary_table(const CorpusSummary& summary) {
    std::ostringstream os;
    os << std::left << std::setw(16) << "benchmark" << std::setw(22) << "outcome"
       << std::setw(6) << "aux" << std::setw(10) << "time(s)" << "status\n";
    os << std::string(60, '-') << "\n";
    for (const auto& e : summary.entries) {
        double secs = 0;
        for (const auto& [k, ms] : e.report.phase_ms) {
            (void)k;
            secs += ms / 1000.0;
        }
        os << std::left << std::setw(16) << e.meta.name << std::setw(22)
           << outcome_name(e.report.outcome) << std::setw(6) << e.report.aux_count
           << std::setw(10) << std::fixed << std::setprecision(1) << secs
           << (e.matched ? "ok" : ("MISMATCH: " + e.mismatch)) << "\n";
    }
    os << std::string(60, '-') << "\n";
    os << (summary.all_matched ? "all expectations met" : "EXPECTATION MISMATCHES PRESENT")
       << " (total " << std::fixed << std::setprecision(1) << summary.total_ms / 1000.0
       << " s)\n";
    return os.str();
}

} // namespace homsynth
