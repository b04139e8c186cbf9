#include "gencur/scenario.hpp"

#include <algorithm>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace gencur {

Scenario::Scenario(std::vector<double> genes) : genes_(std::move(genes)) {
    if (genes_.size() < kMinScenarioLength || genes_.size() > kMaxScenarioLength)
        throw std::invalid_argument("scenario length must be in [1, 1024], got " +
                                    std::to_string(genes_.size()));
    for (double g : genes_)
        if (!(g >= 0.0 && g < 1.0))
            throw std::invalid_argument("scenario gene outside [0, 1)");
}

std::uint64_t canonical_seed(const Scenario& s) {
    const std::uint64_t n = s.length();
    std::uint64_t h = fnv1a64(&n, sizeof n);
    for (double g : s.genes()) {
        std::uint64_t bits;
        std::memcpy(&bits, &g, sizeof bits);
        h = fnv1a64(&bits, sizeof bits, h);
    }
    return h;
}

Scenario random_scenario(std::size_t length, Rng& rng) {
    if (length < kMinScenarioLength || length > kMaxScenarioLength)
        throw std::invalid_argument("requested scenario length must be in [1, 1024]");
    std::vector<double> genes(length);
    for (double& g : genes) g = rng.uniform01();
    return Scenario(std::move(genes));
}

Scenario random_scenario(Rng& rng, std::size_t min_length, std::size_t max_length) {
    if (min_length > max_length)
        throw std::invalid_argument("min_length > max_length");
    const auto length = static_cast<std::size_t>(rng.uniform_int(
        static_cast<std::int64_t>(min_length), static_cast<std::int64_t>(max_length)));
    return random_scenario(length, rng);
}

ScenarioTape::ScenarioTape(Scenario scenario) : scenario_(std::move(scenario)) {}

double ScenarioTape::draw() {
    if (cursor_ < scenario_.length()) return scenario_.genes()[cursor_++];
    if (!overflow_) overflow_.emplace(canonical_seed(scenario_));
    ++cursor_;
    return overflow_->uniform01();
}

std::size_t genetic_distance(const Scenario& a, const Scenario& b) {
    const auto& x = a.genes();
    const auto& y = b.genes();
    if (x == y) return 0;

    // Single-row dynamic program; row[j] holds the distance between the
    // first i genes of x and the first j genes of y.
    std::vector<std::size_t> row(y.size() + 1);
    for (std::size_t j = 0; j <= y.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= x.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= y.size(); ++j) {
            const std::size_t subst = diag + (x[i - 1] == y[j - 1] ? 0 : 1);
            diag = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, subst});
        }
    }
    return row[y.size()];
}

std::string scenario_to_json_line(const Scenario& s) {
    return nlohmann::json(s.genes()).dump();
}

Scenario scenario_from_json_line(const std::string& line) {
    const auto parsed = nlohmann::json::parse(line);
    if (!parsed.is_array())
        throw std::invalid_argument("scenario line is not a JSON array");
    return Scenario(parsed.get<std::vector<double>>());
}

void write_scenario_lines(std::ostream& out, const std::vector<Scenario>& scenarios) {
    for (const auto& s : scenarios) out << scenario_to_json_line(s) << '\n';
}

std::vector<Scenario> read_scenario_lines(std::istream& in) {
    std::vector<Scenario> result;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        result.push_back(scenario_from_json_line(line));
    }
    return result;
}

}  // namespace gencur
