#include "gencur/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>

namespace gencur {
namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
        throw ConfigError("bad unsigned integer for " + key + ": '" + value + "'");
    return out;
}

std::int64_t parse_i64(const std::string& key, const std::string& value) {
    std::int64_t out = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
        throw ConfigError("bad integer for " + key + ": '" + value + "'");
    return out;
}

double parse_f64(const std::string& key, const std::string& value) {
    double out = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
        throw ConfigError("bad number for " + key + ": '" + value + "'");
    return out;
}

std::string format_f64(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string_view run_mode_string(RunMode mode) {
    switch (mode) {
        case RunMode::kGc: return "gc";
        case RunMode::kBaseline: return "baseline";
        case RunMode::kNoMutate: return "no-mutate";
        case RunMode::kNoCrossover: return "no-crossover";
        case RunMode::kRandomFailure: return "random-failure";
        case RunMode::kSingleRun: return "single-run";
    }
    return "?";
}

std::optional<RunMode> parse_run_mode(std::string_view s) {
    if (s == "gc") return RunMode::kGc;
    if (s == "baseline") return RunMode::kBaseline;
    if (s == "no-mutate") return RunMode::kNoMutate;
    if (s == "no-crossover") return RunMode::kNoCrossover;
    if (s == "random-failure") return RunMode::kRandomFailure;
    if (s == "single-run") return RunMode::kSingleRun;
    return std::nullopt;
}

void RunConfig::validate() const {
    try {
        env.validate();
        learner.validate();
        gc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (learner.steps_per_epoch < 1)
        throw ConfigError("learner.steps_per_epoch must be at least 1");
    if (test_set_size < 1) throw ConfigError("run.test_set_size must be at least 1");
}

FlatConfig parse_flat_config(std::istream& in) {
    FlatConfig out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              " is not key=value: '" + stripped + "'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key on config line " + std::to_string(line_no));
        out[key] = value;
    }
    return out;
}

FlatConfig read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path.string());
    return parse_flat_config(in);
}

void apply_override(FlatConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override is not key=value: '" + assignment + "'");
    config[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

RunConfig run_config_from_map(const FlatConfig& map) {
    RunConfig cfg;
    bool budget_given = false;
    for (const auto& [key, value] : map) {
        if (key == "env.id") {
            const auto id = parse_env_id(value);
            if (!id) throw ConfigError("unknown env.id: '" + value + "'");
            cfg.env.id = *id;
        } else if (key == "env.step_budget") {
            cfg.env.step_budget = static_cast<int>(parse_i64(key, value));
            budget_given = true;
        } else if (key == "gc.m_train") {
            cfg.gc.m_train = parse_u64(key, value);
        } else if (key == "gc.m_pop") {
            cfg.gc.m_pop = parse_u64(key, value);
        } else if (key == "gc.p_mu") {
            cfg.gc.p_mu = parse_f64(key, value);
        } else if (key == "gc.max_iterations") {
            cfg.gc.max_iterations = parse_u64(key, value);
        } else if (key == "learner.alpha") {
            cfg.learner.alpha = parse_f64(key, value);
        } else if (key == "learner.gamma") {
            cfg.learner.gamma = parse_f64(key, value);
        } else if (key == "learner.epsilon_start") {
            cfg.learner.epsilon_start = parse_f64(key, value);
        } else if (key == "learner.epsilon_end") {
            cfg.learner.epsilon_end = parse_f64(key, value);
        } else if (key == "learner.steps_per_epoch") {
            cfg.learner.steps_per_epoch = parse_u64(key, value);
        } else if (key == "run.epochs") {
            cfg.epochs = parse_u64(key, value);
        } else if (key == "run.test_set_size") {
            cfg.test_set_size = parse_u64(key, value);
        } else if (key == "run.seed") {
            cfg.master_seed = parse_u64(key, value);
        } else if (key == "run.mode") {
            const auto mode = parse_run_mode(value);
            if (!mode) throw ConfigError("unknown run.mode: '" + value + "'");
            cfg.mode = *mode;
        } else {
            throw ConfigError("unknown config key: '" + key + "'");
        }
    }
    if (!budget_given) cfg.env.step_budget = EnvSpec::defaults(cfg.env.id).resolved_step_budget();
    cfg.validate();
    return cfg;
}

FlatConfig to_flat_map(const RunConfig& cfg) {
    FlatConfig out;
    out["env.id"] = std::string(env_id_string(cfg.env.id));
    out["env.step_budget"] = std::to_string(cfg.env.resolved_step_budget());
    out["gc.m_train"] = std::to_string(cfg.gc.m_train);
    out["gc.m_pop"] = std::to_string(cfg.gc.m_pop);
    out["gc.p_mu"] = format_f64(cfg.gc.p_mu);
    out["gc.max_iterations"] = std::to_string(cfg.gc.max_iterations);
    out["learner.alpha"] = format_f64(cfg.learner.alpha);
    out["learner.gamma"] = format_f64(cfg.learner.gamma);
    out["learner.epsilon_start"] = format_f64(cfg.learner.epsilon_start);
    out["learner.epsilon_end"] = format_f64(cfg.learner.epsilon_end);
    out["learner.steps_per_epoch"] = std::to_string(cfg.learner.steps_per_epoch);
    out["run.epochs"] = std::to_string(cfg.epochs);
    out["run.test_set_size"] = std::to_string(cfg.test_set_size);
    out["run.seed"] = std::to_string(cfg.master_seed);
    out["run.mode"] = std::string(run_mode_string(cfg.mode));
    return out;
}

}  // namespace gencur
