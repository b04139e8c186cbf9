#include "gencur/suite.hpp"

#include <chrono>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace gencur {
namespace {

std::optional<double> mean_defined_distance(const std::vector<MetricsRecord>& records) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& rec : records) {
        if (!rec.mean_genetic_distance) continue;
        sum += *rec.mean_genetic_distance;
        ++count;
    }
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
}

std::string cell_name(EnvId env, RunMode mode, std::uint64_t seed) {
    std::string name(env_id_string(env));
    name += '-';
    name += run_mode_string(mode);
    name += "-s" + std::to_string(seed);
    return name;
}

const SuiteRunSummary* maybe_find(const std::vector<SuiteRunSummary>& summaries, EnvId env,
                                  RunMode mode, std::uint64_t seed) {
    for (const auto& s : summaries)
        if (s.env == env && s.mode == mode && s.seed == seed) return &s;
    return nullptr;
}

}  // namespace

std::vector<SuiteRunSummary> run_suite(const SuiteOptions& options, std::ostream& log) {
    std::vector<SuiteRunSummary> summaries;
    const auto run_cell = [&](EnvId env, RunMode mode, std::uint64_t seed) {
        FlatConfig map = options.base_overrides;
        map["env.id"] = std::string(env_id_string(env));
        map["run.mode"] = std::string(run_mode_string(mode));
        map["run.seed"] = std::to_string(seed);
        const RunConfig cfg = run_config_from_map(map);
        const std::filesystem::path dir = options.out_root / cell_name(env, mode, seed);

        const auto started = std::chrono::steady_clock::now();
        RunResult result = execute_run(cfg, dir);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

        SuiteRunSummary summary;
        summary.env = env;
        summary.mode = mode;
        summary.seed = seed;
        summary.dir = dir;
        summary.final_failure_rate = result.records.back().failure_rate;
        summary.final_mean_reward = result.records.back().mean_reward;
        summary.run_mean_distance = mean_defined_distance(result.records);
        summary.records = std::move(result.records);
        log << cell_name(env, mode, seed) << ": failure_rate "
            << summary.final_failure_rate << ", mean_reward " << summary.final_mean_reward;
        if (summary.run_mean_distance) log << ", mean_distance " << *summary.run_mean_distance;
        log << "  [" << std::fixed << std::setprecision(1) << elapsed << "s]\n";
        log.unsetf(std::ios::fixed);
        log.flush();
        summaries.push_back(std::move(summary));
    };

    for (const RunMode mode : options.ridge_modes)
        for (const std::uint64_t seed : options.seeds) run_cell(EnvId::kRidgeRunner, mode, seed);
    for (const RunMode mode : options.lander_modes)
        for (const std::uint64_t seed : options.seeds)
            run_cell(EnvId::kThrusterLander, mode, seed);
    return summaries;
}

const SuiteRunSummary& find_summary(const std::vector<SuiteRunSummary>& summaries, EnvId env,
                                    RunMode mode, std::uint64_t seed) {
    if (const SuiteRunSummary* s = maybe_find(summaries, env, mode, seed)) return *s;
    throw std::runtime_error("no suite run for " + cell_name(env, mode, seed));
}

PairedComparison compare_final_failure_rate(const std::vector<SuiteRunSummary>& summaries,
                                            EnvId env, RunMode other, bool or_equal) {
    PairedComparison out;
    for (const auto& s : summaries) {
        if (s.env != env || s.mode != RunMode::kGc) continue;
        const SuiteRunSummary* vs = maybe_find(summaries, env, other, s.seed);
        if (!vs) continue;
        ++out.seeds;
        out.mean_gc += s.final_failure_rate;
        out.mean_other += vs->final_failure_rate;
        const bool win = or_equal ? s.final_failure_rate <= vs->final_failure_rate
                                  : s.final_failure_rate < vs->final_failure_rate;
        out.wins += win ? 1 : 0;
    }
    if (out.seeds > 0) {
        out.mean_gc /= static_cast<double>(out.seeds);
        out.mean_other /= static_cast<double>(out.seeds);
    }
    return out;
}

PairedComparison compare_run_mean_distance(const std::vector<SuiteRunSummary>& summaries,
                                           EnvId env, RunMode other) {
    PairedComparison out;
    for (const auto& s : summaries) {
        if (s.env != env || s.mode != RunMode::kGc) continue;
        const SuiteRunSummary* vs = maybe_find(summaries, env, other, s.seed);
        if (!vs || !s.run_mean_distance || !vs->run_mean_distance) continue;
        ++out.seeds;
        out.mean_gc += *s.run_mean_distance;
        out.mean_other += *vs->run_mean_distance;
        out.wins += *s.run_mean_distance < *vs->run_mean_distance ? 1 : 0;
    }
    if (out.seeds > 0) {
        out.mean_gc /= static_cast<double>(out.seeds);
        out.mean_other /= static_cast<double>(out.seeds);
    }
    return out;
}

void print_suite_summary(std::ostream& out, const std::vector<SuiteRunSummary>& summaries) {
    out << "\n=== per-mode aggregates (mean over seeds) ===\n";
    const auto aggregate = [&](EnvId env, RunMode mode) {
        double rate = 0.0, reward = 0.0, distance = 0.0;
        std::size_t n = 0, with_distance = 0;
        for (const auto& s : summaries) {
            if (s.env != env || s.mode != mode) continue;
            rate += s.final_failure_rate;
            reward += s.final_mean_reward;
            if (s.run_mean_distance) {
                distance += *s.run_mean_distance;
                ++with_distance;
            }
            ++n;
        }
        if (n == 0) return;
        out << "  " << env_id_string(env) << ' ' << std::setw(14) << std::left
            << run_mode_string(mode) << std::right << " failure_rate "
            << rate / static_cast<double>(n) << ", reward "
            << reward / static_cast<double>(n);
        if (with_distance > 0)
            out << ", mean_distance " << distance / static_cast<double>(with_distance);
        out << "  (" << n << " seeds)\n";
    };
    for (const EnvId env : {EnvId::kRidgeRunner, EnvId::kThrusterLander})
        for (const RunMode mode :
             {RunMode::kGc, RunMode::kBaseline, RunMode::kNoMutate, RunMode::kNoCrossover,
              RunMode::kRandomFailure, RunMode::kSingleRun})
            aggregate(env, mode);

    out << "\n=== paired direction checks (gc vs other, per seed) ===\n";
    const auto report_rate = [&](EnvId env, RunMode other, bool or_equal) {
        const PairedComparison c = compare_final_failure_rate(summaries, env, other, or_equal);
        if (c.seeds == 0) return;
        out << "  " << env_id_string(env) << " failure_rate: gc " << (or_equal ? "<=" : "<")
            << ' ' << run_mode_string(other) << " on " << c.wins << '/' << c.seeds
            << " seeds (means " << c.mean_gc << " vs " << c.mean_other << ")\n";
    };
    const auto report_distance = [&](EnvId env, RunMode other) {
        const PairedComparison c = compare_run_mean_distance(summaries, env, other);
        if (c.seeds == 0) return;
        out << "  " << env_id_string(env) << " mean_distance: gc < " << run_mode_string(other)
            << " on " << c.wins << '/' << c.seeds << " seeds (means " << c.mean_gc << " vs "
            << c.mean_other << ")\n";
    };
    for (const EnvId env : {EnvId::kRidgeRunner, EnvId::kThrusterLander}) {
        report_rate(env, RunMode::kBaseline, false);
        report_rate(env, RunMode::kNoMutate, true);
        report_rate(env, RunMode::kRandomFailure, false);
        report_distance(env, RunMode::kRandomFailure);
        report_distance(env, RunMode::kNoCrossover);
    }
}

}  // namespace gencur
