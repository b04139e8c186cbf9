#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gencur/config.hpp"
#include "gencur/harness.hpp"
#include "gencur/suite.hpp"

namespace {

namespace fs = std::filesystem;
using namespace gencur;

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "flat key=value config file");
    cmd->add_option("--set", opts.overrides, "override, e.g. --set gc.m_pop=50")
        ->take_all();
    cmd->add_option("--seed", opts.seed, "master seed (overrides run.seed)")
        ->each([&opts](const std::string&) { opts.seed_given = true; });
}

FlatConfig effective_map(const CommonOptions& opts) {
    FlatConfig map;
    if (!opts.config_path.empty()) map = read_config_file(opts.config_path);
    for (const std::string& assignment : opts.overrides) apply_override(map, assignment);
    if (opts.seed_given) map["run.seed"] = std::to_string(opts.seed);
    return map;
}

void print_run_outcome(const RunResult& result) {
    const MetricsRecord& last = result.records.back();
    std::cout << "final epoch " << last.epoch << ": failure_rate " << last.failure_rate
              << " (stderr " << last.stderr_value << "), mean_reward " << last.mean_reward
              << "\npolicy hash " << result.final_policy_hash << "\noutputs in "
              << result.dir.string() << "\n";
}

int run_train_like(const CommonOptions& common, const std::string& mode,
                   const std::string& out_dir, bool ablation) {
    FlatConfig map = effective_map(common);
    map["run.mode"] = mode;
    const RunConfig cfg = run_config_from_map(map);

    const bool is_ablation = cfg.mode != RunMode::kGc && cfg.mode != RunMode::kBaseline;
    if (ablation && !is_ablation)
        throw ConfigError("ablate requires --mode no-mutate|no-crossover|random-failure|single-run");
    if (!ablation && is_ablation)
        throw ConfigError("train requires --mode gc|baseline (use the ablate subcommand)");

    const RunResult result = execute_run(cfg, out_dir);
    print_run_outcome(result);
    return 0;
}

int run_eval(const CommonOptions& common, const std::string& policy_path, std::size_t n) {
    const RunConfig cfg = run_config_from_map(effective_map(common));
    const Policy policy = load_policy(policy_path);
    const EvalResult result = failure_rate(policy, cfg.env, n, cfg.master_seed,
                                           cfg.learner.gamma);
    std::cout << "env " << env_id_string(cfg.env.id) << ", n " << n << ", seed "
              << cfg.master_seed << "\nfailure_rate " << result.rate << "\nstderr "
              << result.stderr_value << "\nmean_reward " << result.mean_reward << "\n";
    return 0;
}

int run_distmat(const std::string& archive, const std::string& out_path) {
    const auto matrix = distance_matrix(archive);
    const std::string csv = distance_matrix_csv(matrix);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << csv;
    }
    return 0;
}

int run_suite_cmd(const CommonOptions& common, const std::string& out_dir, std::size_t n_seeds) {
    if (n_seeds < 1) throw ConfigError("--seeds must be at least 1");
    SuiteOptions options;
    options.out_root = out_dir;
    options.base_overrides = effective_map(common);
    options.seeds.clear();
    for (std::uint64_t s = 1; s <= n_seeds; ++s) options.seeds.push_back(s);

    fs::create_directories(options.out_root);
    const auto summaries = run_suite(options, std::cout);
    print_suite_summary(std::cout, summaries);

    std::ofstream file(options.out_root / "summary.txt", std::ios::binary);
    if (file) print_suite_summary(file, summaries);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"genetic-curriculum trainer and experiment harness"};
    app.require_subcommand(1);

    CommonOptions train_common, ablate_common, eval_common, suite_common;
    std::string train_mode = "gc", ablate_mode, train_out, ablate_out;
    std::string eval_policy, distmat_archive, distmat_out, suite_out;
    std::size_t eval_n = 500, suite_seeds = 5;

    CLI::App* train = app.add_subcommand("train", "train a policy (gc or baseline)");
    add_common(train, train_common);
    train->add_option("--mode", train_mode, "gc | baseline")->capture_default_str();
    train->add_option("--out", train_out, "run output directory")->required();

    CLI::App* ablate = app.add_subcommand("ablate", "run an ablation mode");
    add_common(ablate, ablate_common);
    ablate->add_option("--mode", ablate_mode,
                       "no-mutate | no-crossover | random-failure | single-run")
        ->required();
    ablate->add_option("--out", ablate_out, "run output directory")->required();

    CLI::App* eval = app.add_subcommand("eval", "failure rate of a saved policy");
    add_common(eval, eval_common);
    eval->add_option("--policy", eval_policy, "policy file")->required();
    eval->add_option("--n", eval_n, "test set size")->capture_default_str();

    CLI::App* distmat = app.add_subcommand("distmat", "pairwise distances of an archive");
    distmat->add_option("--curriculum", distmat_archive, "curriculum .jsonl file")->required();
    distmat->add_option("--out", distmat_out, "output csv (default: stdout)");

    CLI::App* suite = app.add_subcommand("suite", "full mode x seed experiment matrix");
    add_common(suite, suite_common);
    suite->add_option("--out", suite_out, "suite output directory")->required();
    suite->add_option("--seeds", suite_seeds, "number of seeds (1..n)")->capture_default_str();

    try {
        app.parse(argc, argv);
        if (train->parsed()) return run_train_like(train_common, train_mode, train_out, false);
        if (ablate->parsed()) return run_train_like(ablate_common, ablate_mode, ablate_out, true);
        if (eval->parsed()) return run_eval(eval_common, eval_policy, eval_n);
        if (distmat->parsed()) return run_distmat(distmat_archive, distmat_out);
        if (suite->parsed()) return run_suite_cmd(suite_common, suite_out, suite_seeds);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const gencur::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
