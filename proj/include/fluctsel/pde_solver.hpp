#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fluctsel/env_models.hpp"
#include "fluctsel/grid.hpp"
#include "fluctsel/rho_ode.hpp"

namespace fluctsel {

/// Mass threshold below which a run is declared extinct.
inline constexpr double kExtinctionMass = 1e-12;

struct SimulationDiagnostics {
    /// ||n(kT) - n((k-1)T)||_inf / ||n(kT)||_inf for each completed period.
    std::vector<double> period_gaps;
    /// Largest mass held by the two nodes next to the boundary.
    double boundary_mass = 0.0;
    /// Total mass removed by clipping negative values.
    double clipped_mass = 0.0;
    std::size_t steps = 0;
    double dt = 0.0;
};

struct SimulationResult {
    DensityField final_field;
    std::vector<TimeValue> rho;  ///< one sample per step, starting at t = 0
    SimulationDiagnostics diagnostics;
    bool extinct = false;
    double extinction_time = 0.0;
};

/// Called after every step with the new time and density.
using StepObserver = std::function<void(double t, std::span<const double> n)>;

/// Integrates the nonlocal equation from n0 up to t_end. The step size is
/// the largest value not above grid.dt that divides the model period.
/// Reaching a mass below kExtinctionMass stops the run with `extinct` set.
SimulationResult simulate(const SimulationGrid& grid, const EnvironmentModel& model,
                          const DensityField& n0, double t_end,
                          const StepObserver& observer = {});

struct OrbitOptions {
    double orbit_tol = 1e-8;
    std::size_t max_periods = 5000;
    std::size_t min_steps_per_period = 1;
};

/// One period of the periodic solution.
struct OrbitRecord {
    SimulationGrid grid;
    double period = 1.0;
    double dt = 0.0;
    std::vector<DensityField> snapshots;  ///< steps + 1 fields on [0, T]
    std::vector<TimeValue> rho_samples;   ///< total mass of each snapshot
    double period_gap = 0.0;              ///< relative gap of the returned period
    std::size_t periods = 0;              ///< periods integrated before convergence
    double contraction_rate = 0.0;        ///< geometric decay factor of the gap per period
    double clipped_mass = 0.0;

    double rho_mean() const;
};

/// Iterates the period map from n0_guess until the relative sup gap between
/// consecutive period starts falls below options.orbit_tol. Throws
/// ExtinctionError when the mass vanishes and NumericalError when
/// max_periods is exceeded.
OrbitRecord find_periodic_orbit(const SimulationGrid& grid, const EnvironmentModel& model,
                                const DensityField& n0_guess, OrbitOptions options = {});

/// Optimal trait of the mean rate: the closed form when available, else
/// located numerically on the grid domain.
double optimal_trait(const EnvironmentModel& model, const SimulationGrid& grid);

/// Gaussian with variance sqrt(sigma) and unit mass centred at the optimal
/// trait.
DensityField default_initial_guess(const SimulationGrid& grid, const EnvironmentModel& model);

/// Population-size bounds of a persistent run:
///   rho_M = max(rho0, d0),
///   rho_m = (1/T) e^{-d0 T} (e^{lambda_m T} - 1), lambda_m = -lambda > 0.
struct RhoBounds {
    double rho_m = 0.0;
    double rho_M = 0.0;
};
RhoBounds population_bounds(double rho0, double d0, double lambda, double period);

/// Exponential supersolution n(t, x) <= exp(C1 - C2 |x| + C3 t) with
/// C3 = sigma C2^2 + d0.
struct ComparisonBound {
    double c1 = 0.0;
    double c2 = 1.0;
    double c3 = 0.0;

    double log_bound(double t, double x) const { return c1 - c2 * std::abs(x) + c3 * t; }
};

/// Smallest C1 for which n0 <= exp(C1 - C2 |x|) on the grid, with C3 as above.
ComparisonBound comparison_bound(const DensityField& n0, const SimulationGrid& grid, double d0,
                                 double c2 = 1.0);

}  // namespace fluctsel
