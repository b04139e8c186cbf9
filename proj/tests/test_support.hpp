#pragma once

#include <filesystem>
#include <initializer_list>
#include <vector>

#include "gencur/env.hpp"
#include "gencur/learner.hpp"
#include "gencur/scenario.hpp"

namespace gencur::test {

// Independent full-matrix Levenshtein, deliberately not sharing code with
// genetic_distance.
inline std::size_t levenshtein_oracle(const std::vector<double>& a,
                                      const std::vector<double>& b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<std::vector<std::size_t>> dp(n + 1, std::vector<std::size_t>(m + 1, 0));
    for (std::size_t i = 0; i <= n; ++i) dp[i][0] = i;
    for (std::size_t j = 0; j <= m; ++j) dp[0][j] = j;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t sub = dp[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            const std::size_t del = dp[i - 1][j] + 1;
            const std::size_t ins = dp[i][j - 1] + 1;
            dp[i][j] = std::min({sub, del, ins});
        }
    return dp[n][m];
}

inline Scenario make_scenario(std::initializer_list<double> genes) {
    return Scenario(std::vector<double>(genes));
}

// Hand-coded rules, used to probe the envs independently of learning.
inline int ridge_oracle_action(const Observation& obs) {
    if (obs[1] == 1) {
        switch (obs[0]) {
            case ridge::kGap: return ridge::kJump;
            case ridge::kWall: return ridge::kVault;
            case ridge::kBar: return ridge::kDuck;
            default: break;
        }
    }
    return ridge::kAdvance;
}

// Brakes in proportion to downward speed; lands under any fault severity.
inline int lander_oracle_action(const Observation& obs) {
    if (obs[1] <= 0) return 0;
    if (obs[1] == 1) return 2;
    return 3;
}

// Free-falls while high, then brakes hard: tuned for nominal thrust, crashes
// when an early severe fault scales the thrust down.
inline int lander_latebrake_action(const Observation& obs) {
    if (obs[0] >= 5) return 0;
    if (obs[1] >= 2) return 3;
    if (obs[1] == 1) return 2;
    return 1;
}

// Realizes a fixed observation -> action rule as a greedy Q-table over the
// env's whole observation space.
inline Policy policy_from_rule(EnvId env, int (*rule)(const Observation&)) {
    Policy policy;
    const auto set = [&](const Observation& obs) { policy.entry(obs).q[rule(obs)] = 1.0; };
    if (env == EnvId::kRidgeRunner) {
        for (int type = 0; type <= 3; ++type)
            for (int dist = 0; dist <= 3; ++dist)
                for (int energy = 0; energy <= ridge::kEnergyCap; ++energy)
                    set({type, dist, energy});
    } else {
        for (int alt = 0; alt <= 12; ++alt)
            for (int vel = -5; vel <= 5; ++vel)
                for (int fuel = 0; fuel <= 6; ++fuel) set({alt, vel, fuel});
    }
    return policy;
}

// Scratch directory under the system temp root, wiped on entry.
inline std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "gencur-tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace gencur::test
