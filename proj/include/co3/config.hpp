#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "co3/fedsim.hpp"
#include "co3/tasks.hpp"

namespace co3 {

struct ConfigError : std::runtime_error {
    ConfigError(const std::string& file, int line, const std::string& message)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + message), line_no(line) {}
    int line_no;
};

/// A full experiment: one task plus one or more schemes to run on it.
/// Parsed from a sectioned key = value file:
///
///   [task]
///   kind = quadratic
///   dimension = 128
///
///   [run]               # defaults shared by every scheme
///   rounds = 50
///   eta = 0.05
///   seed = 1
///
///   [scheme co3_fp4]    # one section per scheme, any run key overridable
///   scheme = co3
///   format = fp4
///   gamma = 0.7
///   bias = fitted       # or fixed:<value>
struct ExperimentConfig {
    TaskSpec task;
    std::vector<SchemeConfig> schemes;
};

ExperimentConfig parse_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config_text(const std::string& text, const std::string& name);

}  // namespace co3
