#include <algorithm>
#include <atomic>
#include <map>

#include <doctest.h>

#include "gencur/curriculum.hpp"
#include "gencur/scenario_source.hpp"
#include "test_support.hpp"

using namespace gencur;
using test::make_scenario;

namespace {

struct CountingEvaluator {
    std::atomic<std::size_t> calls{0};  // evaluators may run concurrently

    ScenarioEvaluator failing_when(bool (*predicate)(const Scenario&)) {
        return [this, predicate](const Scenario& s) {
            ++calls;
            const bool failed = predicate(s);
            return EvaluatedScenario(s, failed, failed ? -100.0 : 100.0);
        };
    }
};

bool always(const Scenario&) { return true; }
bool never(const Scenario&) { return false; }
bool even_seed(const Scenario& s) { return canonical_seed(s) % 2 == 0; }

GcConfig small_config() {
    GcConfig cfg;
    cfg.m_train = 8;
    cfg.m_pop = 12;
    cfg.p_mu = 0.1;
    cfg.max_iterations = 5;
    return cfg;
}

}  // namespace

TEST_CASE("gc config validation") {
    GcConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.m_pop = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = GcConfig{};
    cfg.p_mu = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = GcConfig{};
    cfg.max_iterations = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = GcConfig{};
    cfg.m_train = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("an always-failing policy fills the curriculum in one iteration") {
    RngStreams streams = RngStreams::from_master(21);
    CountingEvaluator counter;
    const Curriculum c =
        generate_curriculum(counter.failing_when(always), small_config(),
                            OperatorMode::kFull, streams, 3);
    CHECK(c.size() == 8);
    CHECK(c.epoch == 3);
    CHECK(counter.calls <= 12);  // stopped inside the first iteration
    // Discovery order, all distinct.
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j)
            CHECK(c.scenarios[i] != c.scenarios[j]);
}

TEST_CASE("an always-succeeding policy yields the empty-curriculum signal") {
    RngStreams streams = RngStreams::from_master(22);
    CountingEvaluator counter;
    const GcConfig cfg = small_config();
    const Curriculum c = generate_curriculum(counter.failing_when(never), cfg,
                                             OperatorMode::kFull, streams, 1);
    CHECK(c.empty());
    // Every iteration re-randomizes and evaluates exactly m_pop members.
    CHECK(counter.calls == cfg.max_iterations * cfg.m_pop);
}

TEST_CASE("evaluation count respects the iteration budget") {
    RngStreams streams = RngStreams::from_master(23);
    CountingEvaluator counter;
    const GcConfig cfg = small_config();
    generate_curriculum(counter.failing_when(even_seed), cfg, OperatorMode::kFull, streams, 1);
    CHECK(counter.calls <= cfg.max_iterations * (cfg.m_pop + 1));
}

TEST_CASE("curriculum members all satisfy the failure predicate") {
    RngStreams streams = RngStreams::from_master(24);
    CountingEvaluator counter;
    const Curriculum c = generate_curriculum(counter.failing_when(even_seed), small_config(),
                                             OperatorMode::kFull, streams, 1);
    CHECK_FALSE(c.empty());
    for (const Scenario& s : c.scenarios) CHECK(even_seed(s));
}

TEST_CASE("duplicates never enter the curriculum") {
    // No mutation and no crossover turns generation k+1 into verbatim copies
    // of generation k, so after the first iteration everything is a dup.
    RngStreams streams = RngStreams::from_master(25);
    GcConfig cfg;
    cfg.m_train = 100;
    cfg.m_pop = 4;
    cfg.p_mu = 0.0;
    cfg.max_iterations = 3;
    CountingEvaluator counter;
    const Curriculum c = generate_curriculum(counter.failing_when(always), cfg,
                                             OperatorMode::kNoCrossover, streams, 1);
    CHECK(c.size() == 4);
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j)
            CHECK(c.scenarios[i] != c.scenarios[j]);
}

TEST_CASE("generate_curriculum is reproducible per master seed") {
    CountingEvaluator c1, c2;
    RngStreams s1 = RngStreams::from_master(77);
    RngStreams s2 = RngStreams::from_master(77);
    const Curriculum a = generate_curriculum(c1.failing_when(even_seed), small_config(),
                                             OperatorMode::kFull, s1, 1);
    const Curriculum b = generate_curriculum(c2.failing_when(even_seed), small_config(),
                                             OperatorMode::kFull, s2, 1);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.scenarios[i] == b.scenarios[i]);
}

TEST_CASE("schedule covers a curriculum in balanced shuffled passes") {
    Rng seeds(26);
    Curriculum c;
    c.scenarios = {random_scenario(seeds), random_scenario(seeds), random_scenario(seeds),
                   random_scenario(seeds)};

    Rng rng(1);
    SUBCASE("two full passes give each scenario exactly twice") {
        const auto order = schedule(c, 8, rng);
        std::map<std::size_t, int> counts;
        for (const std::size_t idx : order) ++counts[idx];
        for (const auto& [idx, n] : counts) {
            CHECK(idx < 4);
            CHECK(n == 2);
        }
    }
    SUBCASE("partial passes stay within one use of each other") {
        const auto order = schedule(c, 6, rng);
        std::array<int, 4> counts{};
        for (const std::size_t idx : order) ++counts[idx];
        std::array<int, 4> sorted = counts;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == std::array<int, 4>{1, 1, 2, 2});
    }
    SUBCASE("a singleton curriculum repeats its only member") {
        Curriculum single;
        single.scenarios = {c.scenarios[0]};
        const auto order = schedule(single, 5, rng);
        CHECK(order == std::vector<std::size_t>(5, 0));
    }
}

TEST_CASE("schedule rejects an empty curriculum") {
    Rng rng(27);
    CHECK_THROWS_AS(schedule(Curriculum{}, 4, rng), std::invalid_argument);
}

TEST_CASE("the round-robin source emits exactly the schedule order") {
    Rng seeds(28);
    Curriculum c;
    for (int i = 0; i < 5; ++i) c.scenarios.push_back(random_scenario(seeds));
    Rng r1(9), r2(9);
    const auto order = schedule(c, 17, r1);
    ShuffledRoundRobinSource source(c.scenarios, r2);
    for (const std::size_t idx : order) CHECK(source.next() == c.scenarios[idx]);
}

TEST_CASE("mean_genetic_distance over consecutive loads") {
    const Scenario a = make_scenario({0.1, 0.2, 0.3});
    const Scenario b = make_scenario({0.4, 0.5, 0.6});  // d(a, b) = 3
    REQUIRE(genetic_distance(a, b) == 3);

    CHECK_FALSE(mean_genetic_distance({}).has_value());
    CHECK_FALSE(mean_genetic_distance({a}).has_value());
    CHECK(mean_genetic_distance({a, b, a}).value() == doctest::Approx(3.0));
    CHECK(mean_genetic_distance({a, a, b}).value() == doctest::Approx(1.5));
    CHECK(mean_genetic_distance({a, a, a, a}).value() == 0.0);
}

TEST_CASE("random and single sources behave as documented") {
    Rng rng(29);
    RandomScenarioSource random_source(rng);
    const Scenario first = random_source.next();
    const Scenario second = random_source.next();
    CHECK(first != second);

    SingleScenarioSource single(first);
    CHECK(single.next() == first);
    CHECK(single.next() == first);
}
