#include "gencur/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace gencur {

std::string_view env_id_string(EnvId id) {
    switch (id) {
        case EnvId::kRidgeRunner: return "ridge-runner";
        case EnvId::kThrusterLander: return "thruster-lander";
    }
    return "?";
}

std::optional<EnvId> parse_env_id(std::string_view s) {
    if (s == "ridge-runner") return EnvId::kRidgeRunner;
    if (s == "thruster-lander") return EnvId::kThrusterLander;
    return std::nullopt;
}

int EnvSpec::resolved_step_budget() const {
    if (step_budget > 0) return step_budget;
    return id == EnvId::kRidgeRunner ? 2 * ridge::kCells : lander::kTMax;
}

void EnvSpec::validate() const {
    if (step_budget < 0) throw std::invalid_argument("env.step_budget must be positive");
}

namespace {

// Obstacle course over a fixed track. Each cell is flat or holds one of
// three obstacle types, each cleared by exactly one verb at an energy cost;
// advancing over flat ground restores energy. Wrong verb or too little
// energy at an obstacle ends the episode as a failure.
class RidgeRunner final : public Env {
  public:
    explicit RidgeRunner(const EnvSpec& spec) : budget_(spec.resolved_step_budget()) {}

    Observation reset(const Scenario& scenario) override {
        ScenarioTape tape(scenario);
        cells_.assign(ridge::kCells, ridge::kFlat);
        int c = 0;
        while (c < ridge::kCells) {
            const double d = tape.draw();
            if (d < 0.70) {
                ++c;
                continue;
            }
            const int type = d < 0.80 ? ridge::kGap : d < 0.90 ? ridge::kWall : ridge::kBar;
            const int size = tape.draw() < 0.5 ? 1 : 2;
            for (int k = 0; k < size && c < ridge::kCells; ++k) cells_[c++] = type;
        }
        pos_ = 0;
        energy_ = ridge::kEnergyStart;
        steps_ = 0;
        outcome_ = Outcome::kOngoing;
        return observe();
    }

    StepResult step(int action) override {
        if (terminal()) throw std::logic_error("step after terminal episode");
        if (action < 0 || action >= kActionCount)
            throw std::invalid_argument("action index out of range");
        ++steps_;
        double reward = 0.0;
        const int target = pos_ + 1;
        const int cell = target < ridge::kCells ? cells_[target] : ridge::kFlat;
        if (cell == ridge::kFlat) {
            // Flat ground (and the finish line) admits any verb the agent
            // can afford; an unaffordable verb wastes the step in place.
            if (energy_ >= verb_cost(action)) {
                pos_ = target;
                if (action == ridge::kAdvance)
                    energy_ = std::min(ridge::kEnergyCap, energy_ + 1);
                else
                    energy_ -= verb_cost(action);
                if (pos_ == ridge::kCells) {
                    outcome_ = Outcome::kSuccess;
                    reward = 100.0;
                } else {
                    reward = 1.0;
                }
            }
        } else {
            const int required = required_verb(cell);
            if (action != required || energy_ < verb_cost(required)) {
                outcome_ = Outcome::kFailure;
                reward = -100.0;
            } else {
                // One verb clears the whole obstacle in front of the runner,
                // however many cells it spans; the runner comes to rest on
                // its far edge.
                int end = target;
                while (end + 1 < ridge::kCells && cells_[end + 1] == cell) ++end;
                reward = static_cast<double>(end - pos_);
                pos_ = end;
                energy_ -= verb_cost(required);
            }
        }
        if (outcome_ == Outcome::kOngoing && steps_ >= budget_) {
            outcome_ = Outcome::kFailure;
            reward -= 100.0;
        }
        return {observe(), reward, terminal(), outcome_};
    }

    bool terminal() const override { return outcome_ != Outcome::kOngoing; }
    Outcome outcome() const override { return outcome_; }
    int steps_taken() const override { return steps_; }

    int cell_at(int index) const { return cells_.at(static_cast<std::size_t>(index)); }

  private:
    static int verb_cost(int action) {
        switch (action) {
            case ridge::kAdvance: return 0;
            case ridge::kJump: return 2;
            case ridge::kVault: return 2;
            default: return 1;  // duck
        }
    }

    static int required_verb(int cell) {
        switch (cell) {
            case ridge::kGap: return ridge::kJump;
            case ridge::kWall: return ridge::kVault;
            default: return ridge::kDuck;  // bar
        }
    }

    Observation observe() const {
        int type = ridge::kFlat;
        int distance = ridge::kDistanceFar;
        for (int k = 1; k <= ridge::kLookahead; ++k) {
            const int cell = pos_ + k;
            if (cell >= ridge::kCells) break;
            if (cells_[cell] != ridge::kFlat) {
                type = cells_[cell];
                distance = k;
                break;
            }
        }
        return {type, distance, energy_};
    }

    std::vector<int> cells_;
    int budget_;
    int pos_ = 0;
    int energy_ = ridge::kEnergyStart;
    int steps_ = 0;
    Outcome outcome_ = Outcome::kOngoing;
};

// Powered-descent toy. Two tape draws set a hidden thruster fault: from
// step t_f on, commanded thrust is scaled by severity sigma in [0.6, 1.0).
// The lander must touch down slower than the safe velocity before fuel and
// the step budget run out.
class ThrusterLander final : public Env {
  public:
    explicit ThrusterLander(const EnvSpec& spec) : budget_(spec.resolved_step_budget()) {}

    Observation reset(const Scenario& scenario) override {
        ScenarioTape tape(scenario);
        const double z0 = tape.draw();
        const double z1 = tape.draw();
        onset_ = static_cast<int>(std::floor(z0 * lander::kTMax));
        severity_ = lander::kSeverityMin + lander::kSeveritySpan * z1;
        altitude_ = lander::kAltitudeStart;
        velocity_ = 0.0;
        fuel_ = lander::kFuelStart;
        steps_ = 0;
        outcome_ = Outcome::kOngoing;
        return observe();
    }

    StepResult step(int action) override {
        if (terminal()) throw std::logic_error("step after terminal episode");
        if (action < 0 || action >= kActionCount)
            throw std::invalid_argument("action index out of range");
        const int burn = std::min(action, fuel_);
        const double effective =
            steps_ >= onset_ ? severity_ * static_cast<double>(burn) : static_cast<double>(burn);
        velocity_ += 1.0 - effective;
        altitude_ -= velocity_;
        fuel_ -= burn;
        ++steps_;
        double reward = -0.1 * static_cast<double>(burn);
        if (altitude_ <= 0.0) {
            if (std::abs(velocity_) <= lander::kSafeVelocity) {
                outcome_ = Outcome::kSuccess;
                reward += 100.0;
            } else {
                outcome_ = Outcome::kFailure;
                reward -= 100.0;
            }
        } else if (steps_ >= budget_) {
            outcome_ = Outcome::kFailure;
            reward -= 100.0;
        }
        return {observe(), reward, terminal(), outcome_};
    }

    bool terminal() const override { return outcome_ != Outcome::kOngoing; }
    Outcome outcome() const override { return outcome_; }
    int steps_taken() const override { return steps_; }

    int fuel_remaining() const { return fuel_; }

  private:
    Observation observe() const {
        const int alt_bucket =
            std::clamp(static_cast<int>(std::floor(altitude_ / 10.0)), 0, 12);
        const int vel_bucket =
            std::clamp(static_cast<int>(std::floor(velocity_ / 2.0)), -5, 5);
        const int fuel_bucket = fuel_ / 20;
        return {alt_bucket, vel_bucket, fuel_bucket};
    }

    int budget_;
    int onset_ = 0;
    double severity_ = 1.0;
    double altitude_ = lander::kAltitudeStart;
    double velocity_ = 0.0;
    int fuel_ = lander::kFuelStart;
    int steps_ = 0;
    Outcome outcome_ = Outcome::kOngoing;
};

}  // namespace

std::unique_ptr<Env> make_env(const EnvSpec& spec) {
    spec.validate();
    if (spec.id == EnvId::kRidgeRunner) return std::make_unique<RidgeRunner>(spec);
    return std::make_unique<ThrusterLander>(spec);
}

}  // namespace gencur
