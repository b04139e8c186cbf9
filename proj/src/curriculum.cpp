#include "gencur/curriculum.hpp"

#include <stdexcept>
#include <unordered_map>

#include "gencur/parallel.hpp"
#include "gencur/scenario_source.hpp"

namespace gencur {

void GcConfig::validate() const {
    if (m_train < 1) throw std::invalid_argument("gc.m_train must be at least 1");
    if (m_pop < 2) throw std::invalid_argument("gc.m_pop must be at least 2");
    if (!(p_mu >= 0.0 && p_mu <= 1.0))
        throw std::invalid_argument("gc.p_mu must be in [0, 1]");
    if (max_iterations < 1) throw std::invalid_argument("gc.max_iterations must be at least 1");
}

Curriculum generate_curriculum(const ScenarioEvaluator& evaluate, const GcConfig& cfg,
                               OperatorMode mode, RngStreams& streams, std::size_t epoch) {
    cfg.validate();

    Curriculum curriculum;
    curriculum.epoch = epoch;

    // Value-identical scenarios would degenerate both the curriculum and the
    // distance metric; keyed by canonical seed, confirmed by exact compare.
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
    auto is_duplicate = [&](const Scenario& s) {
        const auto it = seen.find(canonical_seed(s));
        if (it == seen.end()) return false;
        for (const std::size_t idx : it->second)
            if (curriculum.scenarios[idx] == s) return true;
        return false;
    };

    Population pop;
    pop.members.reserve(cfg.m_pop);
    for (std::size_t i = 0; i < cfg.m_pop; ++i)
        pop.members.emplace_back(random_scenario(streams.population_init));

    for (std::size_t iteration = 1; iteration <= cfg.max_iterations; ++iteration) {
        std::vector<std::optional<EvaluatedScenario>> results(pop.members.size());
        parallel_for(pop.members.size(),
                     [&](std::size_t i) { results[i] = evaluate(pop.members[i].scenario); });
        for (std::size_t i = 0; i < pop.members.size(); ++i)
            pop.members[i] = std::move(*results[i]);

        for (const auto& member : pop.members) {
            if (!member.failed || is_duplicate(member.scenario)) continue;
            seen[canonical_seed(member.scenario)].push_back(curriculum.scenarios.size());
            curriculum.scenarios.push_back(member.scenario);
            if (curriculum.scenarios.size() >= cfg.m_train) return curriculum;
        }

        if (iteration < cfg.max_iterations)
            pop = next_generation(pop, cfg.m_pop, cfg.p_mu, mode, streams);
    }
    return curriculum;
}

std::vector<std::size_t> schedule(const Curriculum& curriculum, std::size_t total_episodes,
                                  Rng& rng) {
    if (curriculum.empty()) throw std::invalid_argument("cannot schedule an empty curriculum");
    ShuffledRoundRobin robin(curriculum.size(), rng);
    std::vector<std::size_t> order(total_episodes);
    for (auto& slot : order) slot = robin.next_index();
    return order;
}

std::optional<double> mean_genetic_distance(const std::vector<Scenario>& loads) {
    if (loads.size() < 2) return std::nullopt;
    double sum = 0.0;
    for (std::size_t i = 1; i < loads.size(); ++i)
        sum += static_cast<double>(genetic_distance(loads[i - 1], loads[i]));
    return sum / static_cast<double>(loads.size() - 1);
}

}  // namespace gencur
