#pragma once

#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gencur/rng.hpp"
#include "gencur/scenario.hpp"

namespace gencur {

// Supplies one scenario per episode reset. Sources are infinite: next() can
// be called any number of times. The returned reference stays valid until
// the following next() call.
class ScenarioSource {
  public:
    virtual ~ScenarioSource() = default;
    virtual const Scenario& next() = 0;
};

// Emits 0..n-1 in shuffled passes: each pass is a fresh random permutation,
// so across any prefix the emission counts differ by at most one.
class ShuffledRoundRobin {
  public:
    ShuffledRoundRobin(std::size_t n, Rng& rng) : rng_(&rng), order_(n) {
        if (n == 0) throw std::invalid_argument("round-robin over empty set");
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        pos_ = n;  // force a shuffle before the first emission
    }

    std::size_t next_index() {
        if (pos_ == order_.size()) {
            shuffle_in_place(order_, *rng_);
            pos_ = 0;
        }
        return order_[pos_++];
    }

  private:
    Rng* rng_;
    std::vector<std::size_t> order_;
    std::size_t pos_;
};

class ShuffledRoundRobinSource final : public ScenarioSource {
  public:
    ShuffledRoundRobinSource(const std::vector<Scenario>& items, Rng& rng)
        : items_(&items), robin_(items.size(), rng) {}

    const Scenario& next() override { return (*items_)[robin_.next_index()]; }

  private:
    const std::vector<Scenario>* items_;
    ShuffledRoundRobin robin_;
};

// Fresh random scenario per episode: the baseline's training distribution
// and the fallback when no curriculum could be built.
class RandomScenarioSource final : public ScenarioSource {
  public:
    explicit RandomScenarioSource(Rng& rng) : rng_(&rng) {}

    const Scenario& next() override {
        current_.emplace(random_scenario(*rng_));
        return *current_;
    }

  private:
    Rng* rng_;
    std::optional<Scenario> current_;
};

class SingleScenarioSource final : public ScenarioSource {
  public:
    explicit SingleScenarioSource(Scenario s) : scenario_(std::move(s)) {}

    const Scenario& next() override { return scenario_; }

  private:
    Scenario scenario_;
};

}  // namespace gencur
