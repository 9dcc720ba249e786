#pragma once

#include <vector>

#include "fluctsel/env_models.hpp"
#include "fluctsel/grid.hpp"
#include "fluctsel/rho_ode.hpp"

namespace fluctsel {

/// Log-domain state of the mutation-free system,
///   n(t, x) = n0(x) exp(int_0^t a(s, x) ds - int_0^t rho(s) ds).
struct ExponentState {
    SimulationGrid grid;
    std::vector<double> log_n0;       ///< ln n0, -inf where n0 = 0
    std::vector<double> log_factors;  ///< int_0^t a(s, x) ds
    double rho_integral = 0.0;        ///< int_0^t rho(s) ds
    double time = 0.0;

    /// ln n(t, x) at node i.
    double log_density(std::size_t i) const {
        return log_n0[i] + log_factors[i] - rho_integral;
    }
    /// Reconstructed density n(t, .).
    DensityField density() const;
};

/// Exponent state at t = 0 for the given initial density.
ExponentState initial_exponent_state(const SimulationGrid& grid, const DensityField& n0);

/// Total mass of the reconstructed density, evaluated with a max shift so
/// that large exponents do not overflow.
double exponent_mass(const ExponentState& state);

struct Sigma0Result {
    std::vector<TimeValue> rho;  ///< one sample per step, starting at t = 0
    ExponentState state;
    bool extinct = false;
};

/// Integrates the mutation-free system. Each step adds the Simpson integral
/// of a over the step to the exponents; rho is coupled with a Heun
/// predictor-corrector on int rho (second order in dt).
Sigma0Result simulate_sigma0(const SimulationGrid& grid, const EnvironmentModel& model,
                             const DensityField& n0, double t_end, double dt);

struct ConcentrationMetrics {
    double mean = 0.0;
    double variance = 0.0;
    double mass_outside = 0.0;  ///< fraction of n / rho with |x - center| > radius
    double argmax = 0.0;        ///< grid node carrying the largest density
};

/// Trapezoid moments of n / rho and the mass fraction outside the ball of
/// the given radius around `center`. Throws ValidationError on zero mass.
ConcentrationMetrics concentration_metrics(const ExponentState& state, double center,
                                           double radius);
ConcentrationMetrics concentration_metrics(const DensityField& field, const SimulationGrid& grid,
                                           double center, double radius);

}  // namespace fluctsel
