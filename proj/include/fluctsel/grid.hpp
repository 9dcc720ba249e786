#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fluctsel/env_models.hpp"

namespace fluctsel {

enum class Boundary { dirichlet_zero };

/// Time discretisation of the mutation-selection step.
///  - backward_euler: implicit diffusion, explicit reaction with rho frozen
///    at the start of the step (first order in time).
///  - crank_nicolson: Strang splitting, reaction half steps solved exactly
///    for trapezoid-averaged a around a Crank-Nicolson diffusion step
///    (second order in time).
enum class TimeScheme { backward_euler, crank_nicolson };

std::string to_string(TimeScheme scheme);
TimeScheme parse_time_scheme(const std::string& name);

/// Uniform grid on the truncated trait domain. Nodes are interior:
/// x_i = x_lo + (i + 1) dx, i = 0 .. nx-1, with zero Dirichlet values at
/// x_lo and x_hi.
struct SimulationGrid {
    double x_lo = -4.0;
    double x_hi = 4.0;
    std::size_t nx = 799;
    double dt = 1.0 / 512.0;
    double sigma = 0.0025;  ///< mutation (diffusion) coefficient, eps^2
    Boundary boundary = Boundary::dirichlet_zero;
    TimeScheme scheme = TimeScheme::backward_euler;

    double dx() const { return (x_hi - x_lo) / static_cast<double>(nx + 1); }
    double x(std::size_t i) const { return x_lo + static_cast<double>(i + 1) * dx(); }
    double radius() const { return 0.5 * (x_hi - x_lo); }
    Interval domain() const { return {x_lo, x_hi}; }
    std::vector<double> nodes() const;
};

/// Validated grid; throws ValidationError on x_lo >= x_hi, nx < 16,
/// dt <= 0 or sigma < 0.
SimulationGrid make_grid(double x_lo, double x_hi, std::size_t nx, double dt, double sigma,
                         TimeScheme scheme = TimeScheme::backward_euler);
void validate(const SimulationGrid& grid);

/// Population density n(t, .) on the interior nodes.
struct DensityField {
    double time = 0.0;
    std::vector<double> values;
};

/// Trapezoid rule over [x_lo, x_hi] with the zero boundary values.
double total_mass(const DensityField& field, const SimulationGrid& grid);
double total_mass(std::span<const double> values, double dx);

/// Gaussian of the given mass and variance centred at `center`.
DensityField gaussian_field(const SimulationGrid& grid, double center, double variance,
                            double mass = 1.0);

/// Number of whole steps per period and the matching step size, at least
/// `min_steps` and no coarser than grid.dt.
struct PeriodStepping {
    std::size_t steps = 0;
    double dt = 0.0;
};
PeriodStepping period_stepping(const SimulationGrid& grid, double period,
                               std::size_t min_steps = 1);

}  // namespace fluctsel
