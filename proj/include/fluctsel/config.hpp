#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fluctsel/env_models.hpp"
#include "fluctsel/grid.hpp"

namespace fluctsel {

struct ModelConfig {
    std::string kind = "oscillating_optimum";  ///< oscillating_optimum | oscillating_pressure | tabulated
    double r = 1.0;
    double g = 1.0;   ///< oscillating_optimum
    double c = 1.0;
    double b = 6.283185307179586;
    double g0 = 2.0;  ///< oscillating_pressure: g(t) = g0 + g1 cos(2 pi t)
    double g1 = 1.8;
    std::string file;  ///< tabulated
    double x_lo = -4.0;
    double x_hi = 4.0;
    double shift = 0.0;  ///< constant added to the rate

    bool operator==(const ModelConfig&) const = default;
};

struct GridConfig {
    double x_lo = -4.0;
    double x_hi = 4.0;
    std::size_t nx = 799;
    double dt = 1.0 / 512.0;
    std::string scheme = "backward_euler";

    bool operator==(const GridConfig&) const = default;
};

struct SolverConfig {
    std::optional<double> eps;
    std::optional<double> sigma;
    double orbit_tol = 1e-8;
    std::size_t max_periods = 5000;
    double eigen_tol = 1e-10;
    std::size_t min_steps_per_period = 512;

    /// sigma when given, else eps^2 (eps defaults to 0.05).
    double diffusion() const;
    double epsilon() const;

    bool operator==(const SolverConfig&) const = default;
};

struct ExperimentConfig {
    std::string tag;
    double t_end = 200.0;
    std::vector<double> eps_list{0.1, 0.05, 0.025};
    std::vector<double> radii{2.0, 3.0, 4.0, 5.0};
    std::optional<double> tau;
    double n0_variance = 1.0;  ///< initial Gaussian of the mutation-free run

    bool operator==(const ExperimentConfig&) const = default;
};

struct OutputConfig {
    std::string dir = "results";

    bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
    ModelConfig model;
    GridConfig grid;
    SolverConfig solver;
    ExperimentConfig experiment;
    OutputConfig output;

    bool operator==(const RunConfig&) const = default;
};

/// Reads a configuration file. Files whose first non-blank character is
/// `{` are read as JSON; everything else as sectioned key-value text:
///
///   [model]
///   kind = oscillating_optimum
///   r = 1
///
/// Comments start with `#` or `;`. Unknown sections or keys, malformed
/// values and failed validation raise ValidationError with the line number.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "config");

/// Applies a `section.key=value` override and re-validates.
void apply_override(RunConfig& config, const std::string& assignment);

/// Checks every numeric field against the module preconditions.
void validate(const RunConfig& config);

/// Key-value text that parses back to an equal configuration.
std::string emit_config(const RunConfig& config);

EnvironmentModel build_model(const ModelConfig& model);
SimulationGrid build_grid(const RunConfig& config);

/// Names of the experiments understood by run_experiment.
const std::vector<std::string>& experiment_tags();

}  // namespace fluctsel
