#include "fluctsel/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fluctsel/errors.hpp"
#include "fluctsel/quadrature.hpp"
#include "fluctsel/stepper.hpp"

namespace fluctsel {

namespace {

double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double relative_gap(const std::vector<double>& now, const std::vector<double>& before) {
    double gap = 0.0;
    for (std::size_t i = 0; i < now.size(); ++i) gap = std::max(gap, std::abs(now[i] - before[i]));
    const double scale = sup_norm(now);
    return scale > 0.0 ? gap / scale : gap;
}

void check_initial(const DensityField& n0, const SimulationGrid& grid, const char* who) {
    if (n0.values.size() != grid.nx) {
        throw ValidationError(std::string(who) + ": initial field size does not match grid");
    }
    bool positive = false;
    for (double v : n0.values) {
        if (v < 0.0 || !std::isfinite(v)) {
            throw ValidationError(std::string(who) + ": initial field must be finite and >= 0");
        }
        positive = positive || v > 0.0;
    }
    if (!positive) throw ValidationError(std::string(who) + ": initial field is identically 0");
}

double geometric_rate(const std::vector<double>& gaps) {
    // Median of the last few successive ratios, robust to an early transient.
    std::vector<double> ratios;
    const std::size_t start = gaps.size() > 8 ? gaps.size() - 8 : 1;
    for (std::size_t k = std::max<std::size_t>(start, 1); k < gaps.size(); ++k) {
        if (gaps[k - 1] > 0.0) ratios.push_back(gaps[k] / gaps[k - 1]);
    }
    if (ratios.empty()) return 0.0;
    std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
    return ratios[ratios.size() / 2];
}

}  // namespace

SimulationResult simulate(const SimulationGrid& grid, const EnvironmentModel& model,
                          const DensityField& n0, double t_end, const StepObserver& observer) {
    validate(grid);
    check_initial(n0, grid, "simulate");
    if (!(t_end >= 0.0)) throw ValidationError("simulate: t_end must be >= 0");

    const PeriodStepping ps = period_stepping(grid, model.period());
    ImexStepper stepper(grid, model, ps.dt, ps.steps);
    const double dx = grid.dx();
    const auto total_steps = static_cast<std::size_t>(std::ceil(t_end / ps.dt - 1e-9));

    SimulationResult out;
    out.diagnostics.dt = ps.dt;
    std::vector<double> n = n0.values;
    std::vector<double> period_start = n;
    double rho = total_mass(n, dx);
    out.rho.reserve(total_steps + 1);
    out.rho.push_back({n0.time, rho});
    auto track_boundary = [&] {
        out.diagnostics.boundary_mass =
            std::max(out.diagnostics.boundary_mass, dx * (n.front() + n.back()));
    };
    track_boundary();

    for (std::size_t k = 0; k < total_steps; ++k) {
        const StepReport rep = stepper.advance(n, k, true);
        out.diagnostics.clipped_mass += rep.clipped_mass;
        ++out.diagnostics.steps;
        rho = total_mass(n, dx);
        const double t = n0.time + ps.dt * static_cast<double>(k + 1);
        out.rho.push_back({t, rho});
        track_boundary();
        if (observer) observer(t, n);
        if ((k + 1) % ps.steps == 0) {
            out.diagnostics.period_gaps.push_back(relative_gap(n, period_start));
            period_start = n;
        }
        if (rho < kExtinctionMass) {
            out.extinct = true;
            out.extinction_time = t;
            break;
        }
    }
    out.final_field = {out.rho.back().t, std::move(n)};
    return out;
}

double OrbitRecord::rho_mean() const {
    if (rho_samples.size() < 2) return rho_samples.empty() ? 0.0 : rho_samples.front().value;
    std::vector<double> v;
    v.reserve(rho_samples.size() - 1);
    for (std::size_t i = 0; i + 1 < rho_samples.size(); ++i) v.push_back(rho_samples[i].value);
    return quad::periodic_mean(v);
}

OrbitRecord find_periodic_orbit(const SimulationGrid& grid, const EnvironmentModel& model,
                                const DensityField& n0_guess, OrbitOptions options) {
    validate(grid);
    check_initial(n0_guess, grid, "find_periodic_orbit");
    if (!(options.orbit_tol > 0.0)) throw ValidationError("orbit_tol must be positive");
    if (options.max_periods == 0) throw ValidationError("max_periods must be positive");

    const PeriodStepping ps = period_stepping(grid, model.period(), options.min_steps_per_period);
    ImexStepper stepper(grid, model, ps.dt, ps.steps);
    const double dx = grid.dx();

    OrbitRecord rec;
    rec.grid = grid;
    rec.period = model.period();
    rec.dt = ps.dt;

    std::vector<double> n = n0_guess.values;
    std::vector<double> start = n;
    std::vector<double> gaps;
    double last_gap = 0.0;
    bool converged = false;
    for (std::size_t p = 1; p <= options.max_periods; ++p) {
        for (std::size_t k = 0; k < ps.steps; ++k) {
            rec.clipped_mass += stepper.advance(n, k, true).clipped_mass;
        }
        if (total_mass(n, dx) < kExtinctionMass) {
            throw ExtinctionError("no positive periodic orbit (lambda >= 0): mass vanished after " +
                                  std::to_string(p) + " periods");
        }
        last_gap = relative_gap(n, start);
        gaps.push_back(last_gap);
        start = n;
        rec.periods = p;
        if (last_gap < options.orbit_tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "find_periodic_orbit: no convergence within " << options.max_periods
            << " periods (last relative gap " << last_gap << ")";
        throw NumericalError(msg.str());
    }
    rec.contraction_rate = geometric_rate(gaps);

    // Record the converged period.
    rec.snapshots.reserve(ps.steps + 1);
    rec.rho_samples.reserve(ps.steps + 1);
    rec.snapshots.push_back({0.0, n});
    rec.rho_samples.push_back({0.0, total_mass(n, dx)});
    for (std::size_t k = 0; k < ps.steps; ++k) {
        rec.clipped_mass += stepper.advance(n, k, true).clipped_mass;
        const double t = ps.dt * static_cast<double>(k + 1);
        rec.snapshots.push_back({t, n});
        rec.rho_samples.push_back({t, total_mass(n, dx)});
    }
    rec.period_gap = relative_gap(rec.snapshots.back().values, rec.snapshots.front().values);
    return rec;
}

double optimal_trait(const EnvironmentModel& model, const SimulationGrid& grid) {
    if (model.analytic()) return model.analytic()->optimum;
    return locate_optimum(model, grid.domain());
}

DensityField default_initial_guess(const SimulationGrid& grid, const EnvironmentModel& model) {
    const double eps = std::sqrt(grid.sigma);
    const double variance = eps > 0.0 ? eps : 0.25;
    return gaussian_field(grid, optimal_trait(model, grid), variance, 1.0);
}

RhoBounds population_bounds(double rho0, double d0, double lambda, double period) {
    if (!(lambda < 0.0)) throw ValidationError("population_bounds: lambda must be negative");
    const double lm = -lambda;
    return {std::exp(-d0 * period) * std::expm1(lm * period) / period, std::max(rho0, d0)};
}

ComparisonBound comparison_bound(const DensityField& n0, const SimulationGrid& grid, double d0,
                                 double c2) {
    ComparisonBound b;
    b.c2 = c2;
    b.c3 = grid.sigma * c2 * c2 + d0;
    b.c1 = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n0.values.size(); ++i) {
        if (n0.values[i] > 0.0) {
            b.c1 = std::max(b.c1, std::log(n0.values[i]) + c2 * std::abs(grid.x(i)));
        }
    }
    return b;
}

}  // namespace fluctsel
