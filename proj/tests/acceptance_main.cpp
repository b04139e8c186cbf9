// Acceptance harness: runs the nine release criteria end to end and prints
// one PASS/FAIL line per criterion. Exits nonzero if any criterion fails.
//
// Usage: gencur_acceptance <path-to-cli-binary> [work-dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gencur/curriculum.hpp"
#include "gencur/harness.hpp"
#include "gencur/suite.hpp"
#include "test_support.hpp"

using namespace gencur;

namespace {

namespace fs = std::filesystem;

struct CriterionResult {
    bool pass = false;
    std::string detail;
};

double seconds_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string format1(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

std::string format3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Drops the last comma-separated field of every line (the wall-clock column
// of a metrics file, which legitimately differs between runs).
std::string strip_last_field(const std::string& text) {
    std::string out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto pos = line.rfind(',');
        out.append(line, 0, pos == std::string::npos ? line.size() : pos);
        out.push_back('\n');
    }
    return out;
}

CriterionResult check_distance_oracle() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(1001);
    const double alphabet[3] = {0.25, 0.5, 0.75};
    const auto random_word = [&] {
        std::vector<double> genes(1 + rng.uniform_index(8));
        for (double& g : genes) g = alphabet[rng.uniform_index(3)];
        return Scenario(std::move(genes));
    };

    const std::size_t pairs = 10000;
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < pairs; ++i) {
        const Scenario a = random_word();
        const Scenario b = random_word();
        if (genetic_distance(a, b) != test::levenshtein_oracle(a.genes(), b.genes()))
            ++mismatches;
    }
    const double secs = seconds_since(start);
    return {mismatches == 0 && secs < 10.0,
            std::to_string(pairs - mismatches) + "/" + std::to_string(pairs) +
                " pairs matched the reference in " + format1(secs) + "s"};
}

CriterionResult check_selection_law() {
    Rng scenario_rng(1002);
    Population pop;
    pop.members.emplace_back(random_scenario(3, scenario_rng), true, -100.0);
    pop.members.emplace_back(random_scenario(5, scenario_rng), true, -100.0);
    pop.members.emplace_back(random_scenario(5, scenario_rng), true, -100.0);
    pop.members.emplace_back(random_scenario(4, scenario_rng), false, 163.0);
    pop.members.emplace_back(random_scenario(6, scenario_rng), false, 163.0);

    const std::vector<double> weights = parent_weights(pop);
    const double expected[3] = {1.0 / 7.0, 3.0 / 7.0, 3.0 / 7.0};

    Rng draw_rng(1003);
    std::vector<std::size_t> counts(pop.members.size(), 0);
    const std::size_t draws = 100000;
    for (std::size_t i = 0; i < draws / 2; ++i) {
        const auto [first, second] = select_parent_pair(weights, draw_rng);
        ++counts[first];
        ++counts[second];
    }

    bool pass = counts[3] == 0 && counts[4] == 0;
    std::string freqs;
    for (int i = 0; i < 3; ++i) {
        const double mean = static_cast<double>(draws) * expected[i];
        const double sigma = std::sqrt(mean * (1.0 - expected[i]));
        if (std::abs(static_cast<double>(counts[i]) - mean) > 3.0 * sigma) pass = false;
        if (i) freqs += "/";
        freqs += format3(static_cast<double>(counts[i]) / static_cast<double>(draws));
    }
    return {pass, "frequencies " + freqs + " vs 0.143/0.429/0.429, non-failing picked " +
                      std::to_string(counts[3] + counts[4]) + " times"};
}

CriterionResult check_replay(const fs::path& work) {
    std::size_t replayed = 0;
    std::size_t failed = 0;
    std::size_t archives = 0;
    bool hashes_ok = true;

    for (const EnvId env : {EnvId::kRidgeRunner, EnvId::kThrusterLander}) {
        RunConfig cfg;
        cfg.env = EnvSpec::defaults(env);
        cfg.epochs = 5;
        cfg.mode = RunMode::kGc;
        cfg.master_seed = 1;
        const fs::path dir = work / (std::string("replay-") + std::string(env_id_string(env)));
        run_gc(cfg, dir);

        for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
            const std::string stem = "epoch_" + std::to_string(epoch);
            const fs::path jsonl = dir / "curricula" / (stem + ".jsonl");
            if (!fs::exists(jsonl)) continue;
            ++archives;
            const ArchiveMeta meta = read_archive_meta(dir / "curricula" / (stem + ".meta.json"));
            const Policy frozen = load_policy(dir / "policies" / (stem + ".policy"));
            if (policy_hash(frozen) != meta.policy_hash) hashes_ok = false;
            for (const Scenario& s : read_curriculum_archive(jsonl)) {
                ++replayed;
                if (evaluate_scenario(frozen, s, cfg.env, cfg.learner.gamma).failed) ++failed;
            }
        }
    }
    return {archives > 0 && hashes_ok && replayed > 0 && failed == replayed,
            std::to_string(failed) + "/" + std::to_string(replayed) +
                " archived scenarios fail on replay across " + std::to_string(archives) +
                " epochs" + (hashes_ok ? "" : "; policy hash mismatch")};
}

CriterionResult check_similarity_direction(const std::vector<SuiteRunSummary>& suite) {
    const PairedComparison cmp =
        compare_run_mean_distance(suite, EnvId::kRidgeRunner, RunMode::kRandomFailure);

    std::size_t single_zero = 0;
    std::size_t single_total = 0;
    for (const SuiteRunSummary& s : suite) {
        if (s.env != EnvId::kRidgeRunner || s.mode != RunMode::kSingleRun) continue;
        ++single_total;
        if (s.run_mean_distance && *s.run_mean_distance == 0.0) ++single_zero;
    }

    const bool pass =
        cmp.wins >= 4 && cmp.seeds == 5 && single_total == 5 && single_zero == single_total;
    return {pass, "distance gc<random-failure on " + std::to_string(cmp.wins) + "/" +
                      std::to_string(cmp.seeds) + " seeds (means " + format1(cmp.mean_gc) +
                      " vs " + format1(cmp.mean_other) + "), single-run zero on " +
                      std::to_string(single_zero) + "/" + std::to_string(single_total)};
}

CriterionResult check_robustness_direction(const std::vector<SuiteRunSummary>& suite,
                                           double suite_secs) {
    const PairedComparison ridge =
        compare_final_failure_rate(suite, EnvId::kRidgeRunner, RunMode::kBaseline, false);
    const PairedComparison lander =
        compare_final_failure_rate(suite, EnvId::kThrusterLander, RunMode::kBaseline, false);

    const auto ratio = [](const PairedComparison& cmp) {
        return cmp.mean_gc > 0.0 ? cmp.mean_other / cmp.mean_gc
                                 : std::numeric_limits<double>::infinity();
    };
    const bool pass = ridge.wins >= 4 && ridge.seeds == 5 && lander.wins >= 4 &&
                      lander.seeds == 5 && suite_secs <= 1800.0;
    return {pass, "gc<baseline ridge " + std::to_string(ridge.wins) + "/5 (ratio " +
                      format1(ratio(ridge)) + "x), lander " + std::to_string(lander.wins) +
                      "/5 (ratio " + format1(ratio(lander)) + "x), suite " +
                      format1(suite_secs) + "s"};
}

CriterionResult check_ablation_ordering(const std::vector<SuiteRunSummary>& suite) {
    const PairedComparison no_mutate =
        compare_final_failure_rate(suite, EnvId::kRidgeRunner, RunMode::kNoMutate, true);
    const PairedComparison random_failure =
        compare_final_failure_rate(suite, EnvId::kRidgeRunner, RunMode::kRandomFailure, false);

    const bool pass = no_mutate.wins >= 4 && no_mutate.seeds == 5 &&
                      random_failure.wins >= 4 && random_failure.seeds == 5;
    return {pass, "gc<=no-mutate on " + std::to_string(no_mutate.wins) +
                      "/5, gc<random-failure on " + std::to_string(random_failure.wins) + "/5"};
}

CriterionResult check_length_span(const std::vector<SuiteRunSummary>& suite) {
    const SuiteRunSummary& run = find_summary(suite, EnvId::kRidgeRunner, RunMode::kGc, 1);
    std::size_t min_len = 0;
    std::size_t max_len = 0;
    std::size_t total = 0;
    for (const auto& entry : fs::directory_iterator(run.dir / "curricula")) {
        if (entry.path().extension() != ".jsonl") continue;
        for (const Scenario& s : read_curriculum_archive(entry.path())) {
            if (total == 0 || s.length() < min_len) min_len = s.length();
            if (s.length() > max_len) max_len = s.length();
            ++total;
        }
    }
    const bool pass = total >= 2 && max_len >= 2 * min_len;
    return {pass, "archived lengths span " + std::to_string(min_len) + ".." +
                      std::to_string(max_len) + " over " + std::to_string(total) +
                      " scenarios in one run"};
}

CriterionResult check_cli_determinism(const std::string& cli, const fs::path& work) {
    if (cli.empty()) return {false, "no CLI binary path supplied"};
    const fs::path dir = work / "determinism";
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "run.cfg");
        cfg << "env.id = ridge-runner\nrun.mode = gc\nrun.seed = 11\nrun.epochs = 3\n";
    }

    for (const char* tag : {"a", "b"}) {
        const std::string cmd = "\"" + cli + "\" train --mode gc --config \"" +
                                (dir / "run.cfg").string() + "\" --out \"" +
                                (dir / tag).string() + "\" > \"" +
                                (dir / (std::string(tag) + ".log")).string() + "\" 2>&1";
        if (std::system(cmd.c_str()) != 0)
            return {false, std::string("CLI run '") + tag + "' exited nonzero"};
    }

    const std::string metrics_a = strip_last_field(slurp(dir / "a" / "metrics.csv"));
    const std::string metrics_b = strip_last_field(slurp(dir / "b" / "metrics.csv"));
    if (metrics_a != metrics_b) return {false, "metrics.csv differs beyond the wall clock"};

    std::vector<fs::path> names_a;
    for (const auto& entry : fs::directory_iterator(dir / "a" / "curricula"))
        names_a.push_back(entry.path().filename());
    std::sort(names_a.begin(), names_a.end());
    std::size_t compared = 0;
    for (const fs::path& name : names_a) {
        if (!fs::exists(dir / "b" / "curricula" / name))
            return {false, "curricula differ: " + name.string() + " missing from second run"};
        if (slurp(dir / "a" / "curricula" / name) != slurp(dir / "b" / "curricula" / name))
            return {false, "curricula differ: " + name.string()};
        ++compared;
    }
    if (slurp(dir / "a" / "policy.final") != slurp(dir / "b" / "policy.final"))
        return {false, "policy.final differs"};
    if (slurp(dir / "a" / "run.json") != slurp(dir / "b" / "run.json"))
        return {false, "run.json differs"};
    return {true, "two CLI runs byte-identical: metrics (minus wall clock), " +
                      std::to_string(compared) + " archive files, policy.final, run.json"};
}

CriterionResult check_no_failure_fallbacks() {
    // A policy that succeeds on every scenario of its env.
    const Policy oracle =
        test::policy_from_rule(EnvId::kThrusterLander, test::lander_oracle_action);
    const EnvSpec spec = EnvSpec::defaults(EnvId::kThrusterLander);

    RngStreams streams = RngStreams::from_master(77);
    Population pop;
    Rng seed_rng(1004);
    for (int i = 0; i < 10; ++i)
        pop.members.emplace_back(random_scenario(seed_rng), false, 100.0);
    const Population fresh = next_generation(pop, 10, 0.1, OperatorMode::kFull, streams);
    bool regenerated = fresh.members.size() == 10;
    for (const EvaluatedScenario& m : fresh.members) {
        if (m.evaluated) regenerated = false;
        if (m.scenario.length() < kInitialLengthMin || m.scenario.length() > kInitialLengthMax)
            regenerated = false;
    }

    const ScenarioEvaluator evaluate = [&](const Scenario& s) {
        return evaluate_scenario(oracle, s, spec);
    };
    const GcConfig gc{8, 10, 0.1, 5};
    RngStreams streams2 = RngStreams::from_master(78);
    const Curriculum curriculum =
        generate_curriculum(evaluate, gc, OperatorMode::kFull, streams2, 1);

    const bool pass = regenerated && curriculum.empty();
    return {pass, std::string("all-success population regenerates ") +
                      std::to_string(fresh.members.size()) +
                      " fresh members; search yields an empty curriculum of size " +
                      std::to_string(curriculum.size())};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const fs::path work =
        argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "gencur-acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    const char* names[9] = {
        "edit-distance oracle equivalence",  "parent-selection frequency law",
        "curriculum replay under frozen policy", "curriculum similarity direction",
        "robustness direction vs baseline",  "ablation ordering on failure rates",
        "curriculum length span",            "end-to-end determinism",
        "no-failure fallback paths",
    };
    std::vector<CriterionResult> results(9);

    const auto guarded = [&](int index, const std::function<CriterionResult()>& fn) {
        try {
            results[index] = fn();
        } catch (const std::exception& e) {
            results[index] = {false, std::string("exception: ") + e.what()};
        }
    };

    guarded(0, check_distance_oracle);
    guarded(1, check_selection_law);
    guarded(2, [&] { return check_replay(work); });

    std::vector<SuiteRunSummary> suite;
    double suite_secs = 0.0;
    std::string suite_error;
    try {
        SuiteOptions options;
        options.out_root = work / "suite";
        const auto start = std::chrono::steady_clock::now();
        suite = run_suite(options, std::clog);
        suite_secs = seconds_since(start);
        print_suite_summary(std::clog, suite);
    } catch (const std::exception& e) {
        suite_error = std::string("suite failed: ") + e.what();
    }

    if (suite_error.empty()) {
        guarded(3, [&] { return check_similarity_direction(suite); });
        guarded(4, [&] { return check_robustness_direction(suite, suite_secs); });
        guarded(5, [&] { return check_ablation_ordering(suite); });
        guarded(6, [&] { return check_length_span(suite); });
    } else {
        for (int i = 3; i <= 6; ++i) results[i] = {false, suite_error};
    }

    guarded(7, [&] { return check_cli_determinism(cli, work); });
    guarded(8, check_no_failure_fallbacks);

    bool all_pass = true;
    for (int i = 0; i < 9; ++i) {
        all_pass = all_pass && results[i].pass;
        std::printf("%s  %d. %s: %s\n", results[i].pass ? "PASS" : "FAIL", i + 1, names[i],
                    results[i].detail.c_str());
    }
    std::fflush(stdout);
    return all_pass ? 0 : 1;
}
