#pragma once

// Scenario plumbing for the command-line front end: JSON configs in,
// deterministic CSV tables out. Parsing, validation and the subcommand
// implementations live in src/scenario.cpp; this header is what the CLI
// binary and the CLI tests link against.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "su11/jsf.hpp"
#include "su11/metrology.hpp"
#include "su11/oracles.hpp"

namespace su11 {

// Validation failure: bad file, bad syntax, unknown key, out-of-range value.
// The CLI maps it (and every std::invalid_argument) to exit code 2; genuine
// compute failures map to exit code 3.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SweepSpec {
    std::string parameter;
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
};

struct AxisSpec {
    double min = -4.0;
    double max = 4.0;
    int points = 201;
};

struct JsfScenario {
    std::vector<double> gains;  // explicit stage gains, or empty when binomial
    int binomial_stages = 0;    // > 0 selects the binomial profile
    double binomial_l1 = 1.0;
    double gain_scale = 0.05;
    double beta = 0.0;
    double l_dm = 0.0;
    double sigma_p = 1.0;
    AxisSpec grid;
    std::optional<LinearMismatch> mismatch;
    std::optional<std::array<double, 4>> filter;  // s_min, s_max, i_min, i_max
};

struct FringeSpec {
    double from = 0.0;
    double to = 2.0 * M_PI;
    int points = 128;
};

struct ScenarioConfig {
    std::string scheme;
    OracleParams params;
    bool bs_t_auto = false;  // bs_t tracks the SNR-optimal splitter per g1
    double internal_loss = 0.0;
    double external_loss = 0.0;
    std::optional<std::vector<QuadratureCoefficientd>> measurement;
    std::optional<SweepSpec> sweep;
    std::optional<JsfScenario> jsf;
    FringeSpec fringe;
    std::string out;
    std::optional<double> tolerance;
    std::uint64_t seed = 0;  // reserved for randomized property sweeps
    std::vector<std::string> suite;  // self-check manifest entries, resolved paths
    std::optional<double> suite_tolerance;
};

ScenarioConfig load_config(const std::string& path);

// One evaluated scenario point, ready for CSV emission.
struct ScenarioRow {
    std::string scheme;
    std::string param_json;
    SnrReport report;
    std::optional<double> snr_oracle;
    std::optional<double> rel_err;
};

ScenarioRow evaluate_scenario(const ScenarioConfig& config);

std::string csv_number(double v);  // %.12g, C locale

struct CliOptions {
    std::string command;  // run | sweep | jsf | fringe | selfcheck
    std::string config_path;
    std::string out;
    std::optional<double> tolerance;
    std::optional<std::uint64_t> seed;
    int threads = 0;  // 0: fall back to SU11_NUM_THREADS, then 1
};

int resolve_threads(int requested);

// Dispatches a parsed command line; returns the process exit code
// (0 success, 2 validation error, 3 physics/runtime failure).
int run_cli(const CliOptions& options);

}  // namespace su11
