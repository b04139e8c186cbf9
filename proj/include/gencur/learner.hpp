#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "gencur/env.hpp"
#include "gencur/genetics.hpp"
#include "gencur/scenario_source.hpp"

namespace gencur {

struct LearnerConfig {
    double alpha = 0.1;
    double gamma = 0.95;
    double epsilon_start = 0.3;
    double epsilon_end = 0.05;
    std::size_t steps_per_epoch = 20000;

    void validate() const;
};

struct PolicyEntry {
    std::array<double, kActionCount> q{};
    std::array<std::uint32_t, kActionCount> visits{};
};

// Tabular action-value function. States never visited read as all-zero
// entries; the table only grows when an update touches a state.
class Policy {
  public:
    const PolicyEntry* find(const Observation& obs) const {
        const auto it = table_.find(obs);
        return it == table_.end() ? nullptr : &it->second;
    }

    PolicyEntry& entry(const Observation& obs) { return table_[obs]; }

    double max_q(const Observation& obs) const;

    // Argmax over action values, ties broken by the lowest action index.
    int greedy_action(const Observation& obs) const;

    std::size_t state_count() const { return table_.size(); }

    const std::unordered_map<Observation, PolicyEntry, ObservationHash>& table() const {
        return table_;
    }

  private:
    std::unordered_map<Observation, PolicyEntry, ObservationHash> table_;
};

// Epsilon-greedy action choice: with probability epsilon a uniform action,
// otherwise the greedy one.
int act(const Policy& policy, const Observation& obs, double epsilon, Rng& rng);

// One-step temporal-difference backup:
// q(s,a) += alpha * (r + gamma * max_a' q(s',a') * [not terminal] - q(s,a)).
void q_update(Policy& policy, const Observation& obs, int action, double reward,
              const Observation& next_obs, bool terminal, const LearnerConfig& cfg);

// Exploration probability at step t of an epoch of `total` steps, annealed
// linearly from epsilon_start (t = 0) to epsilon_end (t = total - 1).
double annealed_epsilon(const LearnerConfig& cfg, std::size_t t, std::size_t total);

struct TrainStats {
    std::size_t steps = 0;
    std::size_t episodes = 0;          // completed episodes only
    std::size_t failures = 0;
    double mean_reward = 0.0;          // over completed episodes
    std::vector<Scenario> load_trace;  // every scenario loaded, in order
};

// Interacts for exactly cfg.steps_per_epoch environment steps, loading a
// scenario from the source at every reset. The final episode may be cut off
// by the step cap; it still counts toward load_trace but not toward the
// episode statistics.
TrainStats train_epoch(Policy& policy, ScenarioSource& source, const EnvSpec& spec,
                       const LearnerConfig& cfg, Rng& exploration);

// One greedy episode under a frozen policy. failed mirrors the env outcome;
// a defensive ceiling of 4 x budget + 16 steps guards against an env that
// never terminates (counted as failure).
EvaluatedScenario evaluate_scenario(const Policy& policy, const Scenario& scenario,
                                    const EnvSpec& spec, double gamma = 0.95);

// Plain-text persistence, one line per state, keys sorted, values written
// with shortest round-trip formatting; equal policies serialize to equal
// bytes and the policy hash is the hash of those bytes.
std::string policy_to_string(const Policy& policy);
Policy policy_from_string(const std::string& text);
void save_policy(const Policy& policy, const std::filesystem::path& path);
Policy load_policy(const std::filesystem::path& path);
std::string policy_hash(const Policy& policy);

}  // namespace gencur
