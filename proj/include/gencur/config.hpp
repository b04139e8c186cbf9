#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gencur/curriculum.hpp"
#include "gencur/env.hpp"
#include "gencur/learner.hpp"

namespace gencur {

// Bad configuration (unknown key, unparsable value, violated invariant,
// missing file). The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RunMode { kGc, kBaseline, kNoMutate, kNoCrossover, kRandomFailure, kSingleRun };

std::string_view run_mode_string(RunMode mode);
std::optional<RunMode> parse_run_mode(std::string_view s);

struct RunConfig {
    EnvSpec env;
    LearnerConfig learner;
    GcConfig gc;
    std::size_t epochs = 15;
    std::size_t test_set_size = 500;
    std::uint64_t master_seed = 1;
    RunMode mode = RunMode::kGc;

    void validate() const;  // throws ConfigError
};

using FlatConfig = std::map<std::string, std::string>;

// Flat key=value format, one pair per line, dotted section keys
// (env.id, gc.m_pop, learner.alpha, run.seed, ...). '#' starts a comment.
FlatConfig parse_flat_config(std::istream& in);
FlatConfig read_config_file(const std::filesystem::path& path);

// Applies a "key=value" override; later calls win.
void apply_override(FlatConfig& config, const std::string& assignment);

// Builds the run configuration, starting from defaults. Unknown keys and
// malformed values are configuration errors. env.step_budget defaults from
// env.id when absent.
RunConfig run_config_from_map(const FlatConfig& map);

// Canonical echo of an effective configuration; feeding it back through
// run_config_from_map reproduces the same RunConfig exactly.
FlatConfig to_flat_map(const RunConfig& cfg);

}  // namespace gencur
