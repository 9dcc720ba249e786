#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fluctsel/env_models.hpp"
#include "fluctsel/floquet.hpp"
#include "fluctsel/grid.hpp"
#include "fluctsel/pde_solver.hpp"
#include "fluctsel/rho_ode.hpp"
#include "fluctsel/signal.hpp"

namespace fluctsel {

/// Hopf-Cole phase u_eps = eps (ln n + ln(2 pi eps) / 2). Densities below
/// 1e-300 are floored. Throws ValidationError on an all-zero field or
/// eps <= 0.
std::vector<double> hopf_cole(const DensityField& field, double eps);

/// Coefficients of u(x) = -A/2 s^2 + B s^3 + C s^4 + O(s^5), s = x - x_m.
struct TaylorCoefficients {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
};

/// Limit phase u(x) = -|int_{x_m}^x sqrt(rho_bar - abar(y)) dy| on a set of
/// trait values.
struct LimitProfile {
    std::vector<double> x;
    std::vector<double> u;
    double x_m = 0.0;
    double rho_bar = 0.0;
    TaylorCoefficients taylor;
};

/// Evaluates the limit phase at a single trait value by Gauss-Legendre
/// quadrature from x_m. Radicands in [-1e-12, 0) are clamped to zero; more
/// negative ones raise ValidationError("H2/limit inconsistency").
double limit_phase(const EnvironmentModel& model, double rho_bar, double x_m, double x);

/// Limit phase on the given traits. Taylor coefficients are exact for the
/// builtin quadratic models and come from five-point differences with step
/// `fd_step` otherwise.
LimitProfile limit_profile(const EnvironmentModel& model, double rho_bar,
                           std::span<const double> xs, double fd_step = 0.1);

/// Limit phase on the grid nodes, with rho_bar = abar(x_m) and the
/// difference step 10 dx.
LimitProfile limit_profile(const EnvironmentModel& model, const SimulationGrid& grid);

/// Five-point differences of the limit phase at x_m.
TaylorCoefficients taylor_coefficients_fd(const EnvironmentModel& model, double rho_bar,
                                          double x_m, double step);

/// First-order corrector v of the two-scale expansion,
///   d_t v = a(t, x) - abar(x) - rho(t) + rho_bar,
/// with the x-dependent constant fixed so that the time mean of d_x v
/// equals (kappa_bar - u'') / (2 u'), and v(t, x_m) = int_0^t (a(s, x_m) - rho(s)) ds
/// - t (abar(x_m) - rho_bar).
struct Corrector {
    double period = 1.0;
    double x_m = 0.0;
    double rho_bar = 0.0;
    double kappa_bar = 0.0;  ///< u''(x_m)
    TaylorCoefficients taylor;
    std::vector<double> t;   ///< sample times on [0, T)
    std::vector<double> D;   ///< d_x v(t, x_m)
    std::vector<double> E;   ///< d_xx v(t, x_m) / 2
    PeriodicSignal D_signal;
    PeriodicSignal E_signal;

    /// v(t, x) from the explicit formula.
    double v(double t, double x) const;
    /// Time mean of d_x v at x, by central differences.
    double mean_dx_v(double x, double h = 1e-3) const;

    std::optional<EnvironmentModel> model;
    RhoOrbit rho_orbit;
};

/// Builds the corrector from the model and the limiting population-size
/// orbit (q = a(., x_m)). `samples` time samples per period.
/// x_m is the closed-form optimum when available, else it is located in
/// `bracket`.
Corrector corrector(const EnvironmentModel& model, const RhoOrbit& rho_orbit,
                    std::size_t samples = 256, Interval bracket = {-4.0, 4.0});

/// k-th moment of the Laplace expansion around x_m through order eps:
///   k = 0: (1/sqrt(A)) [1 + eps (15B^2/(2A^3) + 3(C + B D)/A^2 + (E + D^2/2)/A)],
///          the population size without the factor e^{v(t, x_m)} and without
///          the undetermined F(t) contribution;
///   k = 1: mean, x_m + eps (3B/A^2 + D/A);
///   k = 2: variance, eps / A;
///   k = 3: third central moment, 6 B eps^2 / A^3;
///   k = 4: fourth central moment, 3 eps^2 / A^2.
/// Throws ValidationError for k > 4 or A <= 0.
double gaussian_moment_expansion(int k, const TaylorCoefficients& taylor, double D, double E,
                                 double eps, double x_m = 0.0);

enum class MomentSource { simulated, asymptotic };
std::string to_string(MomentSource source);

struct MomentReport {
    MomentSource source = MomentSource::simulated;
    double period = 1.0;
    std::vector<double> t;       ///< samples on [0, T)
    std::vector<double> mu;
    std::vector<double> sigma2;
    std::vector<double> rho;     ///< empty for asymptotic reports
    double rho_mean = 0.0;
    double mu_mean = 0.0;
    double sigma2_mean = 0.0;
};

/// Asymptotic moments. Closed forms for the builtin kinds; other models go
/// through gaussian_moment_expansion with numerically derived coefficients.
/// The mean population size is abar(x_m) + eps kappa_bar.
MomentReport predict_moments(const EnvironmentModel& model, double eps,
                             std::size_t samples = 256, Interval bracket = {-4.0, 4.0});

/// Trapezoid moments of every orbit snapshot except the repeated endpoint.
MomentReport measure_moments(const OrbitRecord& orbit);

/// Least-squares fit y = c0 + amplitude sin(omega t - lag).
struct SinusoidFit {
    double offset = 0.0;
    double amplitude = 0.0;
    double lag = 0.0;  ///< in (-pi, pi]
    double rms_residual = 0.0;
};
SinusoidFit fit_sinusoid(std::span<const double> t, std::span<const double> y, double omega);

/// Mean fitness int a(tau, x) (1/T) int_0^T n / rho dt dx of the orbit.
double mean_fitness(const OrbitRecord& orbit, const EnvironmentModel& model, double tau);

/// sup over the orbit snapshots and the window of |u_eps - u|.
double hopf_cole_gap(const OrbitRecord& orbit, double eps, const EnvironmentModel& model,
                     Interval window);

/// Stationary state of the environment frozen at tau.
struct StationaryComparison {
    double tau = 0.0;
    double eps = 0.0;
    DensityField numeric;           ///< rho_c P from the frozen eigenproblem
    double rho_numeric = 0.0;       ///< -lambda of the frozen operator
    std::optional<DensityField> analytic;
    std::optional<double> rho_analytic;  ///< r - eps sqrt(G)
    double sup_relative_gap = 0.0;  ///< ||numeric - analytic||_inf / ||analytic||_inf
    double mean = 0.0;
    double variance = 0.0;
};

/// Throws ValidationError when the frozen rate does not support a positive
/// stationary state.
StationaryComparison stationary_constant_env(const EnvironmentModel& model, double tau,
                                             double eps, const SimulationGrid& grid,
                                             FloquetOptions options = {});

struct FitnessComparison {
    double tau = 0.0;
    double eps = 0.0;
    double F_p = 0.0;             ///< measured on the periodic orbit
    double F_p_predicted = 0.0;   ///< r_tau - G eps / A
    double F_c = 0.0;             ///< measured on the numeric stationary state
    double F_c_analytic = 0.0;    ///< r_tau - eps sqrt(G)
    double rho_mean_p = 0.0;
    double rho_c = 0.0;
    double sigma2_p = 0.0;        ///< period mean of the orbit variance
    double sigma2_c = 0.0;
    bool fitness_ordered = false;  ///< F_c < F_p
    bool variance_ordered = false; ///< sigma2_p < sigma2_c
    bool size_ordered = false;     ///< rho_mean_p < rho_c
    std::string ordering;          ///< "F_c < F_p" or "F_c >= F_p"
    StationaryComparison stationary;
};

/// Runs the periodic orbit and the frozen stationary state at tau on the
/// same grid (with sigma = eps^2) and compares their fitness in the frozen
/// environment. Requires a builtin quadratic model.
FitnessComparison fitness_comparison(const EnvironmentModel& model, double tau, double eps,
                                     const SimulationGrid& grid, OrbitOptions orbit = {},
                                     FloquetOptions floquet = {});

}  // namespace fluctsel
