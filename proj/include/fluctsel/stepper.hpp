#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fluctsel/env_models.hpp"
#include "fluctsel/grid.hpp"

namespace fluctsel {

/// Factored constant-coefficient symmetric tridiagonal matrix
/// (diag on the diagonal, off on both off-diagonals), solved by the Thomas
/// algorithm.
class TridiagonalSolver {
public:
    TridiagonalSolver() = default;
    TridiagonalSolver(std::size_t n, double diag, double off);

    /// Solves in place.
    void solve(std::span<double> rhs) const;

private:
    double off_ = 0.0;
    std::vector<double> inv_pivot_;
    std::vector<double> upper_;
};

struct StepReport {
    double clipped_mass = 0.0;       ///< mass removed by clipping negative values
    double reaction_log_growth = 0.0;  ///< log of the mass factor of the reaction part
};

/// Advances n_t = sigma n_xx + n (a - rho) by one step of size dt on the
/// grid, with rho = total mass when `coupled` and rho = 0 otherwise (the
/// linearised problem). Step k starts at time k * dt.
///
/// When `steps_per_period` is non-zero, dt * steps_per_period must equal
/// the model period; reaction factors are then tabulated once per period.
class ImexStepper {
public:
    ImexStepper(SimulationGrid grid, EnvironmentModel model, double dt,
                std::size_t steps_per_period = 0);

    StepReport advance(std::span<double> n, std::size_t step, bool coupled);

    double dt() const { return dt_; }
    const SimulationGrid& grid() const { return grid_; }
    const std::vector<double>& nodes() const { return xs_; }

private:
    struct StepFactors {
        std::vector<double> first;   // BE: a(t_k); CN: exp(h/2 (a(t) + a(t+h)))
        std::vector<double> second;  // CN: exp(h/2 (a(t+h) + a(t+dt)))
        double max_abs_rate = 0.0;
    };

    const StepFactors& factors(std::size_t step);
    void compute_factors(std::size_t step, StepFactors& out) const;
    void diffuse(std::span<double> n);

    SimulationGrid grid_;
    EnvironmentModel model_;
    double dt_;
    std::size_t steps_per_period_;
    std::vector<double> xs_;
    TridiagonalSolver solver_;
    double cn_ratio_ = 0.0;  // sigma dt / (2 dx^2)
    std::vector<StepFactors> table_;
    std::vector<bool> table_ready_;
    StepFactors scratch_;
    std::vector<double> work_;
};

/// One backward-Euler IMEX step of the coupled equation:
/// (I - dt sigma L) n^{k+1} = n^k + dt n^k (a(t_k, .) - rho(t_k)).
/// Throws ValidationError when dt (max|a| + rho) >= 1.
DensityField step_imex(const DensityField& field, const SimulationGrid& grid,
                       const EnvironmentModel& model);

}  // namespace fluctsel
