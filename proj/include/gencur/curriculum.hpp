#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "gencur/genetics.hpp"
#include "gencur/rng.hpp"
#include "gencur/scenario.hpp"

namespace gencur {

struct GcConfig {
    std::size_t m_train = 32;
    std::size_t m_pop = 100;
    double p_mu = 0.1;
    std::size_t max_iterations = 40;

    void validate() const;
};

// The failure scenarios one epoch trains on, in discovery order. An empty
// scenario list is the "no failures found" signal: the caller falls back to
// random-scenario training for that epoch.
struct Curriculum {
    std::vector<Scenario> scenarios;
    std::size_t epoch = 0;

    bool empty() const { return scenarios.empty(); }
    std::size_t size() const { return scenarios.size(); }
};

// Runs one episode of the frozen policy on a scenario and reports whether it
// failed. Must be safe to call from several threads at once.
using ScenarioEvaluator = std::function<EvaluatedScenario(const Scenario&)>;

// Genetic search for failure scenarios: initializes a random population of
// m_pop, then per iteration evaluates every member (in parallel), appends
// the failures to the curriculum (skipping value-identical duplicates), and
// breeds the next generation from the failures. Stops as soon as m_train
// scenarios are collected or after max_iterations iterations.
Curriculum generate_curriculum(const ScenarioEvaluator& evaluate, const GcConfig& cfg,
                               OperatorMode mode, RngStreams& streams, std::size_t epoch);

// Episode order for training on a curriculum: shuffled round-robin, so any
// two scenarios' usage counts differ by at most 1. Returns indices into
// curriculum.scenarios.
std::vector<std::size_t> schedule(const Curriculum& curriculum, std::size_t total_episodes,
                                  Rng& rng);

// Mean edit distance between consecutive loads of a training epoch; empty
// when fewer than two loads happened (the metric is then undefined).
std::optional<double> mean_genetic_distance(const std::vector<Scenario>& loads);

}  // namespace gencur
