#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nullshell/errors.hpp"
#include "nullshell/jump_functions.hpp"

namespace nullshell {

/// Closed interval [lo, hi] sampled with a fixed step; hi is included when it
/// lies on the lattice (within step * 1e-9).
struct GridRange {
    double lo = 0.0;
    double hi = 1.0;
    double step = 0.1;
    std::vector<double> points() const;
};

/// Parses "lo:hi:step". Throws ConfigError.
GridRange parse_range(const std::string& text);
/// Parses a comma-separated list of positive reals. Throws ConfigError.
std::vector<double> parse_list(const std::string& text);

struct RunConfig {
    double lambda = 0.0;
    int dim_n = 3;
    /// Jump function: "expression" uses the expression text, "example" the
    /// four-parameter family.
    std::string jump_kind = "expression";
    std::string expression = "v";
    ExampleParams example;
    GridRange v_range{-3.0, 3.0, 0.1};
    GridRange r_range{0.3, 3.0, 0.1};
    std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
    double test_width = 0.7;
    int samples = 50;
    double sample_half_width = 1.0;
    unsigned seed = 20240607;
    std::string mollifier = "both";
    std::optional<std::string> out;

    /// Throws ConfigError (or ConstraintViolation for the example family).
    void validate() const;
    JumpFunction jump() const;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Reads a JSON configuration; unknown keys are rejected.
RunConfig load_config(const std::string& path);
RunConfig config_from_text(const std::string& json_text);
/// Every key with its default, type and meaning, as JSON.
std::string config_schema();

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct RunResult {
    /// 0 iff no check failed; 1 on failed checks; 2 on invalid input.
    int exit_code = 0;
    /// Report body: JSON for verify, shell-report, products, parse and schema;
    /// CSV for figure-data.
    std::string output;
    std::vector<CheckResult> checks;
};

/// Commands: verify, shell-report, figure-data, products, parse, schema.
/// Output is deterministic for a given configuration.
RunResult run(const std::string& command, const RunConfig& config);

}  // namespace nullshell
