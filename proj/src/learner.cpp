#include "gencur/learner.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace gencur {

void LearnerConfig::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("learner.alpha must be in (0, 1]");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("learner.gamma must be in [0, 1)");
    if (!(epsilon_start <= 1.0 && epsilon_start >= epsilon_end && epsilon_end >= 0.0))
        throw std::invalid_argument("need 1 >= epsilon_start >= epsilon_end >= 0");
}

double Policy::max_q(const Observation& obs) const {
    const PolicyEntry* e = find(obs);
    if (!e) return 0.0;
    return *std::max_element(e->q.begin(), e->q.end());
}

int Policy::greedy_action(const Observation& obs) const {
    const PolicyEntry* e = find(obs);
    if (!e) return 0;
    int best = 0;
    for (int a = 1; a < kActionCount; ++a)
        if (e->q[a] > e->q[best]) best = a;
    return best;
}

int act(const Policy& policy, const Observation& obs, double epsilon, Rng& rng) {
    if (rng.bernoulli(epsilon)) return static_cast<int>(rng.uniform_index(kActionCount));
    return policy.greedy_action(obs);
}

void q_update(Policy& policy, const Observation& obs, int action, double reward,
              const Observation& next_obs, bool terminal, const LearnerConfig& cfg) {
    const double bootstrap = terminal ? 0.0 : cfg.gamma * policy.max_q(next_obs);
    PolicyEntry& e = policy.entry(obs);
    e.q[action] += cfg.alpha * (reward + bootstrap - e.q[action]);
    ++e.visits[action];
}

double annealed_epsilon(const LearnerConfig& cfg, std::size_t t, std::size_t total) {
    if (total <= 1) return cfg.epsilon_start;
    const double frac = static_cast<double>(t) / static_cast<double>(total - 1);
    return cfg.epsilon_start + (cfg.epsilon_end - cfg.epsilon_start) * frac;
}

TrainStats train_epoch(Policy& policy, ScenarioSource& source, const EnvSpec& spec,
                       const LearnerConfig& cfg, Rng& exploration) {
    TrainStats stats;
    if (cfg.steps_per_epoch == 0) return stats;

    auto env = make_env(spec);
    Observation obs{};
    bool episode_active = false;
    double episode_return = 0.0;
    double total_return = 0.0;

    for (std::size_t t = 0; t < cfg.steps_per_epoch; ++t) {
        if (!episode_active) {
            const Scenario& scenario = source.next();
            stats.load_trace.push_back(scenario);
            obs = env->reset(scenario);
            episode_active = true;
            episode_return = 0.0;
        }
        const double epsilon = annealed_epsilon(cfg, t, cfg.steps_per_epoch);
        const int action = act(policy, obs, epsilon, exploration);
        const StepResult result = env->step(action);
        q_update(policy, obs, action, result.reward, result.observation, result.terminal, cfg);
        obs = result.observation;
        episode_return += result.reward;
        if (result.terminal) {
            episode_active = false;
            ++stats.episodes;
            if (result.outcome == Outcome::kFailure) ++stats.failures;
            total_return += episode_return;
        }
    }
    stats.steps = cfg.steps_per_epoch;
    if (stats.episodes > 0) stats.mean_reward = total_return / static_cast<double>(stats.episodes);
    return stats;
}

EvaluatedScenario evaluate_scenario(const Policy& policy, const Scenario& scenario,
                                    const EnvSpec& spec, double gamma) {
    auto env = make_env(spec);
    Observation obs = env->reset(scenario);
    const int ceiling = 4 * spec.resolved_step_budget() + 16;
    double undiscounted = 0.0;
    double discounted = 0.0;
    double discount = 1.0;
    while (!env->terminal() && env->steps_taken() < ceiling) {
        const StepResult result = env->step(policy.greedy_action(obs));
        undiscounted += result.reward;
        discounted += discount * result.reward;
        discount *= gamma;
        obs = result.observation;
    }
    EvaluatedScenario out(scenario);
    out.evaluated = true;
    out.failed = !env->terminal() || env->outcome() == Outcome::kFailure;
    out.reward = undiscounted;
    out.discounted_return = discounted;
    out.steps = static_cast<std::size_t>(env->steps_taken());
    return out;
}

namespace {

constexpr std::string_view kPolicyHeader = "gencur-policy v1";

void append_double(std::string& out, double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    out.append(buf, res.ptr);
}

double parse_double(std::string_view token) {
    double value = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
        throw std::invalid_argument("bad value in policy file: " + std::string(token));
    return value;
}

long long parse_ll(std::string_view token) {
    long long value = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
        throw std::invalid_argument("bad integer in policy file: " + std::string(token));
    return value;
}

}  // namespace

std::string policy_to_string(const Policy& policy) {
    std::vector<std::pair<Observation, const PolicyEntry*>> entries;
    entries.reserve(policy.table().size());
    for (const auto& [obs, entry] : policy.table()) entries.emplace_back(obs, &entry);
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::string out(kPolicyHeader);
    out.push_back('\n');
    for (const auto& [obs, entry] : entries) {
        for (int v : obs) {
            out += std::to_string(v);
            out.push_back(' ');
        }
        for (double q : entry->q) {
            append_double(out, q);
            out.push_back(' ');
        }
        for (std::size_t a = 0; a < entry->visits.size(); ++a) {
            out += std::to_string(entry->visits[a]);
            out.push_back(a + 1 == entry->visits.size() ? '\n' : ' ');
        }
    }
    return out;
}

Policy policy_from_string(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kPolicyHeader)
        throw std::invalid_argument("not a policy file (bad header)");
    Policy policy;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        std::string token;
        while (fields >> token) tokens.push_back(token);
        if (tokens.size() != 3 + 2 * kActionCount)
            throw std::invalid_argument("malformed policy line: " + line);
        Observation obs{};
        for (int i = 0; i < 3; ++i) obs[i] = static_cast<int>(parse_ll(tokens[i]));
        PolicyEntry& entry = policy.entry(obs);
        for (int a = 0; a < kActionCount; ++a) entry.q[a] = parse_double(tokens[3 + a]);
        for (int a = 0; a < kActionCount; ++a)
            entry.visits[a] = static_cast<std::uint32_t>(parse_ll(tokens[3 + kActionCount + a]));
    }
    return policy;
}

void save_policy(const Policy& policy, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open policy file for writing: " + path.string());
    out << policy_to_string(policy);
    if (!out.flush()) throw std::runtime_error("failed writing policy file: " + path.string());
}

Policy load_policy(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open policy file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return policy_from_string(buffer.str());
}

std::string policy_hash(const Policy& policy) {
    const std::string text = policy_to_string(policy);
    const std::uint64_t h = fnv1a64(text.data(), text.size());
    char buf[17];
    for (int i = 0; i < 16; ++i) buf[i] = "0123456789abcdef"[(h >> (60 - 4 * i)) & 0xF];
    buf[16] = '\0';
    return std::string(buf);
}

}  // namespace gencur
