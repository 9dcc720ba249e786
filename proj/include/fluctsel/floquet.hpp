#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fluctsel/env_models.hpp"
#include "fluctsel/grid.hpp"
#include "fluctsel/pde_solver.hpp"
#include "fluctsel/signal.hpp"

namespace fluctsel {

/// Principal periodic eigenpair of p_t - sigma p_xx - a p = lambda p with
/// zero Dirichlet values, normalised so that sup p(0, .) = 1.
struct FloquetPair {
    double lambda = 0.0;
    SimulationGrid grid;
    double period = 1.0;
    double dt = 0.0;
    std::vector<DensityField> p_snapshots;  ///< steps + 1 fields on [0, T]
    std::size_t iterations = 0;
    double growth_factor = 1.0;  ///< sup p(T, .) / sup p(0, .)
    /// Per step, the log mass factor contributed by the reaction part of the
    /// discrete period map.
    std::vector<double> reaction_log_growth;

    double radius() const { return grid.radius(); }
};

struct FloquetOptions {
    double tol = 1e-10;
    std::size_t max_iterations = 20000;
    std::size_t min_steps_per_period = 512;
    std::optional<DensityField> initial_guess;
};

/// Power iteration on the period map of the linear equation, using the same
/// stepper as the nonlinear solver with the competition term removed.
/// Stops when successive sup-norm growth factors agree to `tol` (relative)
/// twice in a row; lambda = -ln(growth) / T.
FloquetPair principal_eigenpair(const SimulationGrid& grid, const EnvironmentModel& model,
                                FloquetOptions options = {});

/// Q(t) = int a p / int p and P = p / int p on the eigenpair snapshots.
struct EffectiveSignal {
    PeriodicSignal Q;
    std::vector<double> q_samples;           ///< Q at every snapshot, endpoint included
    std::vector<DensityField> P_snapshots;   ///< unit mass profiles
    double q_integral_matched = 0.0;         ///< int_0^T Q as seen by the discrete stepper
    double q_integral_quadrature = 0.0;      ///< trapezoid rule on q_samples
};

EffectiveSignal effective_signals(const FloquetPair& pair, const EnvironmentModel& model);

/// |lambda + (1/T) int_0^T Q| using the stepper-matched integral of Q.
double lambda_identity_residual(const FloquetPair& pair, const EffectiveSignal& signal);

/// Same identity with the trapezoid integral of the sampled Q.
double lambda_identity_residual_quadrature(const FloquetPair& pair,
                                           const EffectiveSignal& signal);

struct RadiusPoint {
    double radius = 0.0;
    double lambda = 0.0;
    double identity_residual = 0.0;
    std::size_t iterations = 0;
};

/// Principal eigenvalues on [c - R, c + R] for each radius, with c the
/// centre of `base` and the spacing of `base` kept fixed. Radii must be
/// increasing. Points are computed concurrently.
std::vector<RadiusPoint> radius_sweep(const SimulationGrid& base, const EnvironmentModel& model,
                                      const std::vector<double>& radii,
                                      FloquetOptions options = {});

/// True when lambda_R does not increase with R beyond `slack`.
bool lambda_nonincreasing(const std::vector<RadiusPoint>& sweep, double slack);

/// Largest value of p(t, x) / (sup p * exp(-sqrt(delta / sigma) (|x - center| - r0)))
/// over the snapshots and nodes with |x - center| > r0; a value <= 1 means
/// the exponential tail bound holds everywhere.
double tail_bound_ratio(const FloquetPair& pair, double delta, double r0, double center = 0.0);

/// sup over the orbit snapshots of ||n / rho - P||_inf. The orbit and the
/// eigenpair must share the grid and the time step.
double profile_gap(const OrbitRecord& orbit, const EffectiveSignal& signal);

/// Dirichlet ground energy of -d^2/dx^2 on an interval of the given length,
/// and its three-point discrete counterpart with nx interior nodes.
double dirichlet_ground_energy(double length);
double discrete_dirichlet_ground_energy(double length, std::size_t nx);

}  // namespace fluctsel
