#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gencur/config.hpp"
#include "gencur/curriculum.hpp"
#include "gencur/learner.hpp"

namespace gencur {

double binomial_stderr(double rate, std::size_t n);

// The n random test scenarios for a master seed. Fixed per seed and shared
// by every mode, so paired comparisons see the identical test set.
std::vector<Scenario> test_set(std::size_t n, std::uint64_t master_seed);

struct EvalResult {
    double rate = 0.0;
    double stderr_value = 0.0;
    double mean_reward = 0.0;
    std::vector<bool> failed;  // per test scenario, in test-set order
    std::uint64_t env_steps = 0;
};

// Greedy-policy failure rate over the seed's test set (empirical failure
// probability, with the binomial standard error).
EvalResult failure_rate(const Policy& policy, const EnvSpec& spec, std::size_t n,
                        std::uint64_t master_seed, double gamma = 0.95);

struct MetricsRecord {
    std::size_t epoch = 0;
    double mean_reward = 0.0;
    double failure_rate = 0.0;
    double stderr_value = 0.0;
    std::size_t curriculum_size = 0;
    std::optional<double> mean_genetic_distance;
    std::uint64_t env_steps = 0;
    double wall_seconds = 0.0;
};

std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsRecord& rec);
std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path);

struct ArchiveMeta {
    std::size_t epoch = 0;
    std::string policy_hash;
    FlatConfig config;
};

// curricula/epoch_<k>.jsonl (one scenario per line) plus a sidecar
// epoch_<k>.meta.json carrying the epoch index, the hash of the frozen
// policy the curriculum was generated against, and the config echo.
void write_curriculum_archive(const std::filesystem::path& dir, const Curriculum& curriculum,
                              const ArchiveMeta& meta);
std::vector<Scenario> read_curriculum_archive(const std::filesystem::path& jsonl_path);
ArchiveMeta read_archive_meta(const std::filesystem::path& meta_path);

struct RunResult {
    std::vector<MetricsRecord> records;
    Policy final_policy;
    std::string final_policy_hash;
    std::filesystem::path dir;
};

// One full experiment: per epoch, freeze the policy, build the epoch's
// curriculum per the configured mode, archive it, train on it for
// learner.steps_per_epoch steps, and evaluate on the fixed test set. Epoch 0
// records the untrained policy. Writes metrics.csv, curricula/, per-epoch
// policy snapshots, policy.final and run.json under out_dir.
RunResult run_gc(const RunConfig& cfg, const std::filesystem::path& out_dir);

// Same epoch/evaluation cadence, no curriculum: every reset draws a fresh
// random scenario.
RunResult run_baseline(const RunConfig& cfg, const std::filesystem::path& out_dir);

// no-mutate / no-crossover run the genetic search with the operator
// disabled; random-failure fills the curriculum by rejection-sampling random
// scenarios the frozen policy fails; single-run trains the whole epoch on
// the first failure found.
RunResult run_ablation(const RunConfig& cfg, const std::filesystem::path& out_dir);

// Dispatch on cfg.mode.
RunResult execute_run(const RunConfig& cfg, const std::filesystem::path& out_dir);

// Pairwise genetic distances between all scenarios of an archive.
std::vector<std::vector<std::size_t>> distance_matrix(const std::filesystem::path& archive);
std::string distance_matrix_csv(const std::vector<std::vector<std::size_t>>& matrix);

}  // namespace gencur
