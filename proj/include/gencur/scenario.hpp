#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gencur/rng.hpp"

namespace gencur {

inline constexpr std::size_t kMinScenarioLength = 1;
inline constexpr std::size_t kMaxScenarioLength = 1024;
inline constexpr std::size_t kInitialLengthMin = 8;
inline constexpr std::size_t kInitialLengthMax = 32;

// A scenario is a finite sequence of genes in [0, 1). It stands in for the
// environment's random draws: an episode replayed on the same scenario is
// fully deterministic. Genes are only ever copied between scenarios, never
// recomputed, so equality of gene values is exact.
class Scenario {
  public:
    explicit Scenario(std::vector<double> genes);

    const std::vector<double>& genes() const { return genes_; }
    std::size_t length() const { return genes_.size(); }

    bool operator==(const Scenario& other) const { return genes_ == other.genes_; }
    bool operator!=(const Scenario& other) const { return !(*this == other); }

  private:
    std::vector<double> genes_;
};

// Stable 64-bit identity of a scenario: hashes the length and the exact bit
// patterns of the genes. Also seeds the overflow stream of a tape.
std::uint64_t canonical_seed(const Scenario& s);

// Fresh scenario with independent uniform genes. Throws std::invalid_argument
// if length is outside [1, 1024].
Scenario random_scenario(std::size_t length, Rng& rng);

// Length drawn uniformly from [min_length, max_length] first.
Scenario random_scenario(Rng& rng, std::size_t min_length = kInitialLengthMin,
                         std::size_t max_length = kInitialLengthMax);

// Read head over a scenario. Episodes that need more draws than the scenario
// holds continue from a deterministic overflow stream seeded by the
// scenario's canonical seed, so a given scenario always yields the same
// infinite draw sequence.
class ScenarioTape {
  public:
    explicit ScenarioTape(Scenario scenario);

    double draw();
    std::size_t cursor() const { return cursor_; }
    bool overflowed() const { return cursor_ > scenario_.length(); }
    const Scenario& scenario() const { return scenario_; }

  private:
    Scenario scenario_;
    std::size_t cursor_ = 0;
    std::optional<Rng> overflow_;
};

// Levenshtein distance between gene sequences (unit-cost insert, delete,
// substitute; genes compare exactly). This is the similarity measure used
// both for curriculum statistics and for comparing run modes.
std::size_t genetic_distance(const Scenario& a, const Scenario& b);

// One scenario per line as a JSON array of genes.
std::string scenario_to_json_line(const Scenario& s);
Scenario scenario_from_json_line(const std::string& line);

void write_scenario_lines(std::ostream& out, const std::vector<Scenario>& scenarios);
std::vector<Scenario> read_scenario_lines(std::istream& in);

}  // namespace gencur
