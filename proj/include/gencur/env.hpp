#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include "gencur/scenario.hpp"

namespace gencur {

enum class EnvId { kRidgeRunner, kThrusterLander };

std::string_view env_id_string(EnvId id);
std::optional<EnvId> parse_env_id(std::string_view s);

// Environment constants. step_budget of 0 means "use the env default"
// (2 x track length for ridge-runner, T_max for thruster-lander).
struct EnvSpec {
    EnvId id = EnvId::kRidgeRunner;
    int step_budget = 0;

    int resolved_step_budget() const;
    void validate() const;

    static EnvSpec defaults(EnvId id) { return EnvSpec{id, 0}; }
};

enum class Outcome { kOngoing, kSuccess, kFailure };

// Discretized state, identical shape for both envs: three small integers.
using Observation = std::array<int, 3>;

struct ObservationHash {
    std::size_t operator()(const Observation& o) const {
        std::uint64_t x = 0;
        for (int v : o) {
            x ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) + 0x9E3779B9ULL +
                 (x << 6) + (x >> 2);
            x = splitmix64_step(x);
        }
        return static_cast<std::size_t>(x);
    }
};

struct StepResult {
    Observation observation;
    double reward = 0.0;
    bool terminal = false;
    Outcome outcome = Outcome::kOngoing;
};

// Episode handle. All randomness comes from the scenario tape at reset, so a
// (spec, scenario, action sequence) triple always produces the same
// trajectory. A handle may be reset repeatedly and reused across episodes,
// but is single-owner mutable state: one handle per worker.
class Env {
  public:
    virtual ~Env() = default;
    virtual Observation reset(const Scenario& scenario) = 0;
    virtual StepResult step(int action) = 0;
    virtual bool terminal() const = 0;
    virtual Outcome outcome() const = 0;
    virtual int steps_taken() const = 0;
};

inline constexpr int kActionCount = 4;

std::unique_ptr<Env> make_env(const EnvSpec& spec);

namespace ridge {
inline constexpr int kCells = 64;
inline constexpr int kEnergyStart = 6;
inline constexpr int kEnergyCap = 6;
// actions
inline constexpr int kAdvance = 0;
inline constexpr int kJump = 1;
inline constexpr int kVault = 2;
inline constexpr int kDuck = 3;
// cell / observation obstacle codes
inline constexpr int kFlat = 0;
inline constexpr int kGap = 1;
inline constexpr int kWall = 2;
inline constexpr int kBar = 3;
inline constexpr int kLookahead = 3;
inline constexpr int kDistanceFar = 0;
}  // namespace ridge

namespace lander {
inline constexpr double kAltitudeStart = 100.0;
inline constexpr int kFuelStart = 120;
inline constexpr int kTMax = 120;
inline constexpr double kSafeVelocity = 4.0;
inline constexpr double kSeverityMin = 0.6;
inline constexpr double kSeveritySpan = 0.4;
}  // namespace lander

}  // namespace gencur
