#include "gencur/genetics.hpp"

#include <algorithm>

namespace gencur {
namespace {

// First index whose cumulative weight exceeds a uniform draw. Zero-weight
// entries contribute nothing to the running sum, so they can never be hit.
std::size_t draw_categorical(const std::vector<double>& weights, Rng& rng) {
    const double u = rng.uniform01();
    double cum = 0.0;
    std::size_t last_positive = weights.size();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        cum += weights[i];
        last_positive = i;
        if (u < cum) return i;
    }
    if (last_positive == weights.size()) throw NoParentsError();
    // Rounding can leave the total a hair under 1; fall back to the last
    // positive-weight entry.
    return last_positive;
}

struct Segment {
    std::size_t begin;
    std::size_t end;
};

Segment draw_segment(std::size_t length, Rng& rng) {
    const std::size_t i = rng.uniform_index(length);
    const std::size_t j = i + 1 + rng.uniform_index(length - i);
    return {i, j};
}

std::vector<double> splice(const std::vector<double>& host, std::size_t i, std::size_t j,
                           const std::vector<double>& donor, std::size_t di, std::size_t dj) {
    std::vector<double> genes;
    genes.reserve(host.size() - (j - i) + (dj - di));
    genes.insert(genes.end(), host.begin(), host.begin() + static_cast<std::ptrdiff_t>(i));
    genes.insert(genes.end(), donor.begin() + static_cast<std::ptrdiff_t>(di),
                 donor.begin() + static_cast<std::ptrdiff_t>(dj));
    genes.insert(genes.end(), host.begin() + static_cast<std::ptrdiff_t>(j), host.end());
    return genes;
}

}  // namespace

std::vector<double> parent_weights(const Population& pop) {
    std::vector<double> weights(pop.members.size(), 0.0);
    std::size_t max_failing_length = 0;
    for (const auto& m : pop.members)
        if (m.failed) max_failing_length = std::max(max_failing_length, m.scenario.length());
    if (max_failing_length == 0) return weights;

    double sum = 0.0;
    for (std::size_t i = 0; i < pop.members.size(); ++i) {
        if (!pop.members[i].failed) continue;
        weights[i] = 1.0 / static_cast<double>(max_failing_length -
                                               pop.members[i].scenario.length() + 1);
        sum += weights[i];
    }
    for (double& w : weights) w /= sum;
    return weights;
}

std::pair<std::size_t, std::size_t> select_parent_pair(const std::vector<double>& weights,
                                                       Rng& rng) {
    const std::size_t first = draw_categorical(weights, rng);
    const std::size_t second = draw_categorical(weights, rng);
    return {first, second};
}

std::pair<Scenario, Scenario> crossover_with_segments(const Scenario& a, const Scenario& b,
                                                      std::size_t i1, std::size_t j1,
                                                      std::size_t i2, std::size_t j2) {
    if (i1 >= j1 || j1 > a.length() || i2 >= j2 || j2 > b.length())
        throw std::invalid_argument("crossover segment out of range or empty");
    return {Scenario(splice(a.genes(), i1, j1, b.genes(), i2, j2)),
            Scenario(splice(b.genes(), i2, j2, a.genes(), i1, j1))};
}

std::pair<Scenario, Scenario> crossover_pair(const Scenario& a, const Scenario& b, Rng& rng) {
    constexpr int kMaxRetries = 16;
    Segment sa{0, 1};
    Segment sb{0, 1};
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        sa = draw_segment(a.length(), rng);
        sb = draw_segment(b.length(), rng);
        const std::size_t len1 = a.length() - (sa.end - sa.begin) + (sb.end - sb.begin);
        const std::size_t len2 = b.length() - (sb.end - sb.begin) + (sa.end - sa.begin);
        if (len1 <= kMaxScenarioLength && len2 <= kMaxScenarioLength)
            return crossover_with_segments(a, b, sa.begin, sa.end, sb.begin, sb.end);
    }
    // Length cap kept tripping; truncate each incoming segment to whatever
    // room its host has left. The host keeps at least its own removed
    // segment's worth of room, so offspring stay nonempty.
    const std::size_t room1 = kMaxScenarioLength - (a.length() - (sa.end - sa.begin));
    const std::size_t room2 = kMaxScenarioLength - (b.length() - (sb.end - sb.begin));
    const std::size_t in1 = std::min(sb.end - sb.begin, room1);
    const std::size_t in2 = std::min(sa.end - sa.begin, room2);
    return {Scenario(splice(a.genes(), sa.begin, sa.end, b.genes(), sb.begin, sb.begin + in1)),
            Scenario(splice(b.genes(), sb.begin, sb.end, a.genes(), sa.begin, sa.begin + in2))};
}

Scenario mutate(const Scenario& s, double p_mu, Rng& rng) {
    if (!(p_mu >= 0.0 && p_mu <= 1.0))
        throw std::invalid_argument("p_mu must be in [0, 1]");
    if (!rng.bernoulli(p_mu)) return s;
    const Scenario partner = random_scenario(rng);
    return crossover_pair(s, partner, rng).first;
}

Population next_generation(const Population& pop, std::size_t m_pop, double p_mu,
                           OperatorMode mode, RngStreams& streams) {
    if (m_pop < 2) throw std::invalid_argument("m_pop must be at least 2");

    Population next;
    next.generation = pop.generation + 1;
    next.members.reserve(m_pop + 1);

    const std::vector<double> weights = parent_weights(pop);
    const bool no_parents = std::all_of(weights.begin(), weights.end(),
                                        [](double w) { return w == 0.0; });
    if (no_parents) {
        // Nothing failed; restart the search from fresh random scenarios.
        for (std::size_t i = 0; i < m_pop; ++i)
            next.members.emplace_back(random_scenario(streams.population_init));
        return next;
    }

    if (mode == OperatorMode::kNoCrossover) {
        while (next.members.size() < m_pop) {
            const auto [first, second] = select_parent_pair(weights, streams.crossover);
            next.members.emplace_back(pop.members[first].scenario);
            if (next.members.size() < m_pop)
                next.members.emplace_back(pop.members[second].scenario);
        }
    } else {
        while (next.members.size() < m_pop) {
            const auto [first, second] = select_parent_pair(weights, streams.crossover);
            auto [c1, c2] = crossover_pair(pop.members[first].scenario,
                                           pop.members[second].scenario, streams.crossover);
            next.members.emplace_back(std::move(c1));
            next.members.emplace_back(std::move(c2));
        }
    }

    const double p_effective = (mode == OperatorMode::kNoMutate) ? 0.0 : p_mu;
    for (auto& member : next.members)
        member = EvaluatedScenario(mutate(member.scenario, p_effective, streams.mutation));
    return next;
}

}  // namespace gencur
