#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "gencur/harness.hpp"

namespace gencur {

struct SuiteRunSummary {
    EnvId env = EnvId::kRidgeRunner;
    RunMode mode = RunMode::kGc;
    std::uint64_t seed = 0;
    std::filesystem::path dir;
    double final_failure_rate = 0.0;
    double final_mean_reward = 0.0;
    // Mean of the per-epoch consecutive-load distances, over the epochs
    // where the metric is defined.
    std::optional<double> run_mean_distance;
    std::vector<MetricsRecord> records;
};

struct SuiteOptions {
    std::filesystem::path out_root;
    // Overrides applied on top of the defaults for every cell (env, mode and
    // seed keys are set per cell afterwards).
    FlatConfig base_overrides;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::vector<RunMode> ridge_modes = {RunMode::kGc,          RunMode::kBaseline,
                                        RunMode::kNoMutate,    RunMode::kNoCrossover,
                                        RunMode::kRandomFailure, RunMode::kSingleRun};
    std::vector<RunMode> lander_modes = {RunMode::kGc, RunMode::kBaseline};
};

// Runs the full mode x seed matrix on both environments, one run directory
// per cell under out_root. Logs one line per finished run.
std::vector<SuiteRunSummary> run_suite(const SuiteOptions& options, std::ostream& log);

const SuiteRunSummary& find_summary(const std::vector<SuiteRunSummary>& summaries, EnvId env,
                                    RunMode mode, std::uint64_t seed);

// Per-(env, mode) aggregate table plus the paired-seed direction checks.
void print_suite_summary(std::ostream& out, const std::vector<SuiteRunSummary>& summaries);

// How many seeds satisfy metric(gc) < metric(other) (or <= with or_equal),
// over the seeds present for both modes.
struct PairedComparison {
    std::size_t wins = 0;
    std::size_t seeds = 0;
    double mean_gc = 0.0;
    double mean_other = 0.0;
};

PairedComparison compare_final_failure_rate(const std::vector<SuiteRunSummary>& summaries,
                                            EnvId env, RunMode other, bool or_equal);
PairedComparison compare_run_mean_distance(const std::vector<SuiteRunSummary>& summaries,
                                           EnvId env, RunMode other);

}  // namespace gencur
