#include "fluctsel/grid.hpp"

#include <cmath>
#include <numbers>

#include "fluctsel/errors.hpp"

namespace fluctsel {

std::string to_string(TimeScheme scheme) {
    return scheme == TimeScheme::crank_nicolson ? "crank_nicolson" : "backward_euler";
}

TimeScheme parse_time_scheme(const std::string& name) {
    if (name == "backward_euler") return TimeScheme::backward_euler;
    if (name == "crank_nicolson") return TimeScheme::crank_nicolson;
    throw ValidationError("unknown time scheme '" + name + "'");
}

std::vector<double> SimulationGrid::nodes() const {
    std::vector<double> xs(nx);
    for (std::size_t i = 0; i < nx; ++i) xs[i] = x(i);
    return xs;
}

void validate(const SimulationGrid& grid) {
    if (!(grid.x_lo < grid.x_hi)) throw ValidationError("grid: x_lo must be < x_hi");
    if (grid.nx < 16) throw ValidationError("grid: nx must be >= 16");
    if (!(grid.dt > 0.0)) throw ValidationError("grid: dt must be positive");
    if (!(grid.sigma >= 0.0)) throw ValidationError("grid: sigma must be >= 0");
}

SimulationGrid make_grid(double x_lo, double x_hi, std::size_t nx, double dt, double sigma,
                         TimeScheme scheme) {
    SimulationGrid g;
    g.x_lo = x_lo;
    g.x_hi = x_hi;
    g.nx = nx;
    g.dt = dt;
    g.sigma = sigma;
    g.scheme = scheme;
    validate(g);
    return g;
}

double total_mass(std::span<const double> values, double dx) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc * dx;
}

double total_mass(const DensityField& field, const SimulationGrid& grid) {
    return total_mass(field.values, grid.dx());
}

DensityField gaussian_field(const SimulationGrid& grid, double center, double variance,
                            double mass) {
    if (!(variance > 0.0)) throw ValidationError("gaussian_field: variance must be positive");
    DensityField f;
    f.values.resize(grid.nx);
    const double norm = mass / std::sqrt(2.0 * std::numbers::pi * variance);
    for (std::size_t i = 0; i < grid.nx; ++i) {
        const double y = grid.x(i) - center;
        f.values[i] = norm * std::exp(-0.5 * y * y / variance);
    }
    return f;
}

PeriodStepping period_stepping(const SimulationGrid& grid, double period, std::size_t min_steps) {
    auto steps = static_cast<std::size_t>(std::ceil(period / grid.dt - 1e-9));
    steps = std::max(steps, std::max<std::size_t>(min_steps, 1));
    return {steps, period / static_cast<double>(steps)};
}

}  // namespace fluctsel
