#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <renskog/renskog.h>

namespace rencli {

// Configuration failure attributable to one key; the CLI exits 1 with it.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& key, const std::string& msg)
        : std::runtime_error("config key '" + key + "': " + msg) {}
};

struct Scenario {
    rek_grid_spec grid;
    rek_operator_config op;

    std::string solver_r = "auto"; // "auto" or a number
    std::string solver_k = "auto"; // "auto", a number, or a report.json path
    std::string solver_l = "auto"; // "auto" or a number
    double tol = 1e-10;
    int max_iter = 50;

    std::string initial_kind = "zero"; // zero | gaussian | from_file
    double amplitude = 0.05;
    double x_width = 1.0;
    double p_width = 1.0;
    std::string initial_path;

    std::string output_dir = "out";
    std::uint64_t seed = 0;
    int hypotheses_samples = 200;
    std::vector<double> boltzmann_a_values = {0.2, 0.1, 0.05};
    long selftest_samples = 1000000;
};

// Flat dotted key = value text; '#' starts a comment. Unknown keys are errors.
Scenario parse_scenario_file(const std::string& path);

} // namespace rencli
