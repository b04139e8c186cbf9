#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gencur/rng.hpp"
#include "gencur/scenario.hpp"

namespace gencur {

// A population member after (or before) evaluation under the frozen policy.
struct EvaluatedScenario {
    Scenario scenario;
    bool evaluated = false;
    bool failed = false;
    double reward = 0.0;             // undiscounted episode return
    double discounted_return = 0.0;
    std::size_t steps = 0;

    explicit EvaluatedScenario(Scenario s) : scenario(std::move(s)) {}
    EvaluatedScenario(Scenario s, bool did_fail, double r)
        : scenario(std::move(s)), evaluated(true), failed(did_fail), reward(r) {}
};

struct Population {
    std::vector<EvaluatedScenario> members;
    std::size_t generation = 0;
};

enum class OperatorMode {
    kFull,         // crossover + mutation
    kNoMutate,     // crossover only
    kNoCrossover,  // fitness-weighted copies + mutation
};

// Thrown by parent selection when no member of the population failed, i.e.
// there is nothing for the search to breed from.
struct NoParentsError : std::runtime_error {
    NoParentsError() : std::runtime_error("no failing scenarios to select parents from") {}
};

// Selection weight of each member: failing scenarios weigh
// 1 / (max_failing_length - length + 1), everything else 0; weights are
// normalized to sum to 1.
std::vector<double> parent_weights(const Population& pop);

// Two independent draws from the weight distribution (the same member may be
// picked twice). Throws NoParentsError when every weight is zero.
std::pair<std::size_t, std::size_t> select_parent_pair(const std::vector<double>& weights,
                                                       Rng& rng);

// Deterministic crossover core: swaps gene segment [i1, j1) of a with
// segment [i2, j2) of b. Segments must be nonempty and inside their parent.
// Offspring lengths are len(a) - (j1-i1) + (j2-i2) and the mirror image.
std::pair<Scenario, Scenario> crossover_with_segments(const Scenario& a, const Scenario& b,
                                                      std::size_t i1, std::size_t j1,
                                                      std::size_t i2, std::size_t j2);

// Randomized crossover: picks a nonempty contiguous segment in each parent
// (segment start uniform, then end uniform over what remains) and swaps
// them. Offspring exceeding the maximum length get the incoming segment
// truncated to fit.
std::pair<Scenario, Scenario> crossover_pair(const Scenario& a, const Scenario& b, Rng& rng);

// With probability p_mu, crosses s with a fresh random scenario and keeps
// the first offspring; otherwise returns s unchanged.
Scenario mutate(const Scenario& s, double p_mu, Rng& rng);

// Breeds the next population from the current one. Uses streams.crossover
// for selection and segment draws, streams.mutation for mutation, and
// streams.population_init when the population must be re-randomized because
// nothing failed. Requires m_pop >= 2.
Population next_generation(const Population& pop, std::size_t m_pop, double p_mu,
                           OperatorMode mode, RngStreams& streams);

}  // namespace gencur
