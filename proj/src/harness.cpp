#include "gencur/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "gencur/parallel.hpp"
#include "gencur/scenario_source.hpp"

namespace gencur {
namespace {

namespace fs = std::filesystem;

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_double_field(const std::string& token) {
    double value = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
        throw std::runtime_error("bad numeric field in metrics file: '" + token + "'");
    return value;
}

OperatorMode operator_mode_for(RunMode mode) {
    switch (mode) {
        case RunMode::kNoMutate: return OperatorMode::kNoMutate;
        case RunMode::kNoCrossover: return OperatorMode::kNoCrossover;
        default: return OperatorMode::kFull;
    }
}

void write_run_json(const fs::path& dir, const RunConfig& cfg, const std::string& status,
                    const std::optional<std::string>& hash) {
    nlohmann::ordered_json j;
    j["master_seed"] = cfg.master_seed;
    j["mode"] = run_mode_string(cfg.mode);
    j["status"] = status;
    j["config"] = to_flat_map(cfg);
    if (hash) j["policy_hash"] = *hash;
    std::ofstream out(dir / "run.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write run.json in " + dir.string());
    out << j.dump(2) << '\n';
}

// Curriculum construction for the rejection-sampling modes: draw random
// scenarios and keep the ones the frozen policy fails, up to the attempt
// cap. single-run keeps only the first failure.
Curriculum rejection_sample_curriculum(const ScenarioEvaluator& evaluate, std::size_t want,
                                       std::size_t attempt_cap, Rng& rng, std::size_t epoch) {
    Curriculum curriculum;
    curriculum.epoch = epoch;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
    for (std::size_t attempt = 0; attempt < attempt_cap; ++attempt) {
        const Scenario candidate = random_scenario(rng);
        if (!evaluate(candidate).failed) continue;
        const std::uint64_t key = canonical_seed(candidate);
        bool duplicate = false;
        for (const std::size_t idx : seen[key])
            if (curriculum.scenarios[idx] == candidate) duplicate = true;
        if (duplicate) continue;
        seen[key].push_back(curriculum.scenarios.size());
        curriculum.scenarios.push_back(candidate);
        if (curriculum.scenarios.size() >= want) break;
    }
    return curriculum;
}

Curriculum build_epoch_curriculum(const RunConfig& cfg, const Policy& frozen,
                                  RngStreams& streams, std::size_t epoch,
                                  std::uint64_t& env_steps) {
    std::atomic<std::uint64_t> steps{0};
    const ScenarioEvaluator evaluate = [&](const Scenario& s) {
        EvaluatedScenario ev = evaluate_scenario(frozen, s, cfg.env, cfg.learner.gamma);
        steps.fetch_add(ev.steps, std::memory_order_relaxed);
        return ev;
    };

    Curriculum curriculum;
    switch (cfg.mode) {
        case RunMode::kGc:
        case RunMode::kNoMutate:
        case RunMode::kNoCrossover:
            curriculum = generate_curriculum(evaluate, cfg.gc, operator_mode_for(cfg.mode),
                                             streams, epoch);
            break;
        case RunMode::kRandomFailure:
            curriculum = rejection_sample_curriculum(evaluate, cfg.gc.m_train,
                                                     20 * cfg.gc.m_train,
                                                     streams.population_init, epoch);
            break;
        case RunMode::kSingleRun:
            curriculum = rejection_sample_curriculum(evaluate, 1, 20 * cfg.gc.m_train,
                                                     streams.population_init, epoch);
            break;
        case RunMode::kBaseline:
            curriculum.epoch = epoch;
            break;
    }
    env_steps += steps.load();
    return curriculum;
}

RunResult run_impl(const RunConfig& cfg, const fs::path& out_dir) {
    cfg.validate();
    fs::create_directories(out_dir);
    fs::create_directories(out_dir / "curricula");
    fs::create_directories(out_dir / "policies");
    write_run_json(out_dir, cfg, "running", std::nullopt);

    std::ofstream metrics(out_dir / "metrics.csv", std::ios::binary);
    if (!metrics) throw std::runtime_error("cannot write metrics.csv in " + out_dir.string());
    metrics << metrics_csv_header() << '\n';

    RngStreams streams = RngStreams::from_master(cfg.master_seed);
    RunResult result;
    result.dir = out_dir;
    Policy policy;
    std::uint64_t env_steps = 0;
    const auto started = std::chrono::steady_clock::now();

    const auto evaluate_and_record = [&](std::size_t epoch, std::size_t curriculum_size,
                                         std::optional<double> distance) {
        const EvalResult ev =
            failure_rate(policy, cfg.env, cfg.test_set_size, cfg.master_seed, cfg.learner.gamma);
        env_steps += ev.env_steps;
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        const MetricsRecord rec{epoch,    ev.mean_reward, ev.rate,   ev.stderr_value,
                                curriculum_size, distance, env_steps, wall};
        metrics << metrics_csv_row(rec) << '\n';
        metrics.flush();
        result.records.push_back(rec);
    };

    evaluate_and_record(0, 0, std::nullopt);

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const Curriculum curriculum =
            cfg.mode == RunMode::kBaseline
                ? Curriculum{{}, epoch}
                : build_epoch_curriculum(cfg, policy, streams, epoch, env_steps);

        if (!curriculum.empty()) {
            // Snapshot the frozen policy the curriculum was built against so
            // the archive can be replayed later.
            const std::string frozen_hash = policy_hash(policy);
            save_policy(policy, out_dir / "policies" /
                                    ("epoch_" + std::to_string(epoch) + ".policy"));
            write_curriculum_archive(out_dir / "curricula", curriculum,
                                     {epoch, frozen_hash, to_flat_map(cfg)});
        } else if (cfg.mode != RunMode::kBaseline) {
            std::clog << "[gencur] epoch " << epoch << ": no failures found, training on "
                      << "random scenarios\n";
        }

        TrainStats stats;
        if (curriculum.empty()) {
            RandomScenarioSource source(streams.population_init);
            stats = train_epoch(policy, source, cfg.env, cfg.learner, streams.exploration);
        } else {
            ShuffledRoundRobinSource source(curriculum.scenarios, streams.schedule);
            stats = train_epoch(policy, source, cfg.env, cfg.learner, streams.exploration);
        }
        env_steps += stats.steps;
        evaluate_and_record(epoch, curriculum.size(), mean_genetic_distance(stats.load_trace));
    }

    if (cfg.mode == RunMode::kGc && cfg.epochs >= 1 &&
        result.records.back().failure_rate > result.records[1].failure_rate)
        std::clog << "[gencur] warning: failure rate rose from "
                  << result.records[1].failure_rate << " (epoch 1) to "
                  << result.records.back().failure_rate << " (final epoch)\n";

    result.final_policy_hash = policy_hash(policy);
    save_policy(policy, out_dir / "policy.final");
    write_run_json(out_dir, cfg, "complete", result.final_policy_hash);
    result.final_policy = std::move(policy);
    return result;
}

}  // namespace

double binomial_stderr(double rate, std::size_t n) {
    return std::sqrt(rate * (1.0 - rate) / static_cast<double>(n));
}

std::vector<Scenario> test_set(std::size_t n, std::uint64_t master_seed) {
    Rng rng = substream(master_seed, "test-set");
    std::vector<Scenario> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(random_scenario(rng));
    return out;
}

EvalResult failure_rate(const Policy& policy, const EnvSpec& spec, std::size_t n,
                        std::uint64_t master_seed, double gamma) {
    if (n < 1) throw std::invalid_argument("test set size must be at least 1");
    const std::vector<Scenario> scenarios = test_set(n, master_seed);
    std::vector<std::optional<EvaluatedScenario>> results(n);
    parallel_for(n, [&](std::size_t i) {
        results[i] = evaluate_scenario(policy, scenarios[i], spec, gamma);
    });

    EvalResult out;
    out.failed.resize(n);
    std::size_t failures = 0;
    double total_reward = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const EvaluatedScenario& ev = *results[i];
        out.failed[i] = ev.failed;
        failures += ev.failed ? 1 : 0;
        total_reward += ev.reward;
        out.env_steps += ev.steps;
    }
    out.rate = static_cast<double>(failures) / static_cast<double>(n);
    out.stderr_value = binomial_stderr(out.rate, n);
    out.mean_reward = total_reward / static_cast<double>(n);
    return out;
}

std::string metrics_csv_header() {
    return "epoch,mean_reward,failure_rate,stderr,curriculum_size,mean_genetic_distance,"
           "env_steps,wall_seconds";
}

std::string metrics_csv_row(const MetricsRecord& rec) {
    std::string row = std::to_string(rec.epoch);
    row += ',';
    row += format_double(rec.mean_reward);
    row += ',';
    row += format_double(rec.failure_rate);
    row += ',';
    row += format_double(rec.stderr_value);
    row += ',';
    row += std::to_string(rec.curriculum_size);
    row += ',';
    if (rec.mean_genetic_distance) row += format_double(*rec.mean_genetic_distance);
    row += ',';
    row += std::to_string(rec.env_steps);
    row += ',';
    row += format_double(rec.wall_seconds);
    return row;
}

std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read metrics file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != metrics_csv_header())
        throw std::runtime_error("unexpected metrics header in " + path.string());

    std::vector<MetricsRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream row(line);
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (line.back() == ',') fields.push_back("");
        if (fields.size() != 8)
            throw std::runtime_error("malformed metrics row: '" + line + "'");
        MetricsRecord rec;
        rec.epoch = static_cast<std::size_t>(parse_double_field(fields[0]));
        rec.mean_reward = parse_double_field(fields[1]);
        rec.failure_rate = parse_double_field(fields[2]);
        rec.stderr_value = parse_double_field(fields[3]);
        rec.curriculum_size = static_cast<std::size_t>(parse_double_field(fields[4]));
        if (!fields[5].empty()) rec.mean_genetic_distance = parse_double_field(fields[5]);
        rec.env_steps = static_cast<std::uint64_t>(parse_double_field(fields[6]));
        rec.wall_seconds = parse_double_field(fields[7]);
        records.push_back(rec);
    }
    return records;
}

void write_curriculum_archive(const std::filesystem::path& dir, const Curriculum& curriculum,
                              const ArchiveMeta& meta) {
    const std::string stem = "epoch_" + std::to_string(curriculum.epoch);
    std::ofstream lines(dir / (stem + ".jsonl"), std::ios::binary);
    if (!lines) throw std::runtime_error("cannot write curriculum archive in " + dir.string());
    write_scenario_lines(lines, curriculum.scenarios);
    if (!lines.flush()) throw std::runtime_error("failed writing curriculum archive");

    nlohmann::ordered_json j;
    j["epoch"] = meta.epoch;
    j["policy_hash"] = meta.policy_hash;
    j["config"] = meta.config;
    std::ofstream side(dir / (stem + ".meta.json"), std::ios::binary);
    if (!side) throw std::runtime_error("cannot write archive metadata in " + dir.string());
    side << j.dump(2) << '\n';
}

std::vector<Scenario> read_curriculum_archive(const std::filesystem::path& jsonl_path) {
    std::ifstream in(jsonl_path, std::ios::binary);
    if (!in) throw ConfigError("cannot read curriculum archive: " + jsonl_path.string());
    try {
        return read_scenario_lines(in);
    } catch (const std::exception& e) {
        throw ConfigError("malformed curriculum archive " + jsonl_path.string() + ": " +
                          e.what());
    }
}

ArchiveMeta read_archive_meta(const std::filesystem::path& meta_path) {
    std::ifstream in(meta_path, std::ios::binary);
    if (!in) throw ConfigError("cannot read archive metadata: " + meta_path.string());
    try {
        const auto j = nlohmann::json::parse(in);
        ArchiveMeta meta;
        meta.epoch = j.at("epoch").get<std::size_t>();
        meta.policy_hash = j.at("policy_hash").get<std::string>();
        meta.config = j.at("config").get<FlatConfig>();
        return meta;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("malformed archive metadata " + meta_path.string() + ": " + e.what());
    }
}

RunResult run_gc(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    if (cfg.mode != RunMode::kGc && cfg.mode != RunMode::kNoMutate &&
        cfg.mode != RunMode::kNoCrossover)
        throw ConfigError("run_gc requires mode gc, no-mutate or no-crossover");
    return run_impl(cfg, out_dir);
}

RunResult run_baseline(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    if (cfg.mode != RunMode::kBaseline) throw ConfigError("run_baseline requires mode baseline");
    return run_impl(cfg, out_dir);
}

RunResult run_ablation(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    switch (cfg.mode) {
        case RunMode::kNoMutate:
        case RunMode::kNoCrossover:
            return run_gc(cfg, out_dir);
        case RunMode::kRandomFailure:
        case RunMode::kSingleRun:
            return run_impl(cfg, out_dir);
        default:
            throw ConfigError("run_ablation requires an ablation mode");
    }
}

RunResult execute_run(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    switch (cfg.mode) {
        case RunMode::kGc: return run_gc(cfg, out_dir);
        case RunMode::kBaseline: return run_baseline(cfg, out_dir);
        default: return run_ablation(cfg, out_dir);
    }
}

std::vector<std::vector<std::size_t>> distance_matrix(const std::filesystem::path& archive) {
    const std::vector<Scenario> scenarios = read_curriculum_archive(archive);
    if (scenarios.size() < 2)
        throw ConfigError("distance matrix needs an archive of at least 2 scenarios, got " +
                          std::to_string(scenarios.size()));
    const std::size_t n = scenarios.size();
    std::vector<std::vector<std::size_t>> matrix(n, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::size_t d = genetic_distance(scenarios[i], scenarios[j]);
            matrix[i][j] = d;
            matrix[j][i] = d;
        }
    return matrix;
}

std::string distance_matrix_csv(const std::vector<std::vector<std::size_t>>& matrix) {
    std::string out;
    for (const auto& row : matrix) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            out += std::to_string(row[j]);
            out.push_back(j + 1 == row.size() ? '\n' : ',');
        }
    }
    return out;
}

}  // namespace gencur
