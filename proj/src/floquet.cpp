#include "fluctsel/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>

#include "fluctsel/errors.hpp"
#include "fluctsel/pde_solver.hpp"
#include "fluctsel/quadrature.hpp"
#include "fluctsel/stepper.hpp"

namespace fluctsel {

namespace {

double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

void scale(std::vector<double>& v, double factor) {
    for (double& x : v) x *= factor;
}

}  // namespace

FloquetPair principal_eigenpair(const SimulationGrid& grid, const EnvironmentModel& model,
                                FloquetOptions options) {
    validate(grid);
    if (!(options.tol > 0.0)) throw ValidationError("principal_eigenpair: tol must be positive");
    const PeriodStepping ps =
        period_stepping(grid, model.period(), std::max<std::size_t>(options.min_steps_per_period, 1));
    ImexStepper stepper(grid, model, ps.dt, ps.steps);

    std::vector<double> p;
    if (options.initial_guess) {
        p = options.initial_guess->values;
        if (p.size() != grid.nx) throw ValidationError("principal_eigenpair: guess size mismatch");
    } else {
        // The eigenproblem does not need a unique optimum; fall back to the
        // domain centre when there is none.
        double center = 0.5 * (grid.x_lo + grid.x_hi);
        try {
            center = optimal_trait(model, grid);
        } catch (const ValidationError&) {
        }
        const double eps = std::sqrt(grid.sigma);
        p = gaussian_field(grid, center, eps > 0.0 ? eps : 0.25).values;
    }
    double top = sup_norm(p);
    if (!(top > 0.0)) throw ValidationError("principal_eigenpair: initial guess is zero");
    scale(p, 1.0 / top);

    FloquetPair pair;
    pair.grid = grid;
    pair.period = model.period();
    pair.dt = ps.dt;

    double prev = 0.0;
    double growth = 0.0;
    int hits = 0;
    bool converged = false;
    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        for (std::size_t k = 0; k < ps.steps; ++k) stepper.advance(p, k, false);
        growth = sup_norm(p);
        if (!(growth > 0.0) || !std::isfinite(growth)) {
            throw NumericalError("principal_eigenpair: iterate lost positivity");
        }
        scale(p, 1.0 / growth);
        pair.iterations = it;
        if (it > 1 && std::abs(growth - prev) <= options.tol * growth) {
            if (++hits >= 2) {
                converged = true;
                break;
            }
        } else {
            hits = 0;
        }
        prev = growth;
    }
    if (!converged) {
        std::ostringstream msg;
        msg.precision(15);
        msg << "principal_eigenpair: no convergence after " << options.max_iterations
            << " iterations (last growth factors " << prev << ", " << growth << ")";
        throw NumericalError(msg.str());
    }

    // Record one normalised period.
    pair.p_snapshots.reserve(ps.steps + 1);
    pair.reaction_log_growth.reserve(ps.steps);
    pair.p_snapshots.push_back({0.0, p});
    for (std::size_t k = 0; k < ps.steps; ++k) {
        pair.reaction_log_growth.push_back(stepper.advance(p, k, false).reaction_log_growth);
        pair.p_snapshots.push_back({ps.dt * static_cast<double>(k + 1), p});
    }
    pair.growth_factor = sup_norm(p);
    pair.lambda = -std::log(pair.growth_factor) / pair.period;
    return pair;
}

EffectiveSignal effective_signals(const FloquetPair& pair, const EnvironmentModel& model) {
    const double dx = pair.grid.dx();
    const std::vector<double> xs = pair.grid.nodes();
    std::vector<double> a(xs.size());
    EffectiveSignal sig;
    sig.q_samples.reserve(pair.p_snapshots.size());
    sig.P_snapshots.reserve(pair.p_snapshots.size());
    for (const DensityField& snap : pair.p_snapshots) {
        model.rate_profile(snap.time, xs, a);
        double mass = 0.0;
        double weighted = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            mass += snap.values[i];
            weighted += a[i] * snap.values[i];
        }
        if (!(mass > 0.0)) throw NumericalError("effective_signals: zero-mass snapshot");
        sig.q_samples.push_back(weighted / mass);
        DensityField P{snap.time, snap.values};
        scale(P.values, 1.0 / (mass * dx));
        sig.P_snapshots.push_back(std::move(P));
    }
    std::vector<double> periodic(sig.q_samples.begin(), sig.q_samples.end() - 1);
    sig.Q = PeriodicSignal::from_samples(pair.period, periodic);
    sig.q_integral_quadrature = quad::trapezoid(sig.q_samples, pair.dt);
    for (double g : pair.reaction_log_growth) sig.q_integral_matched += g;
    return sig;
}

double lambda_identity_residual(const FloquetPair& pair, const EffectiveSignal& signal) {
    return std::abs(pair.lambda + signal.q_integral_matched / pair.period);
}

double lambda_identity_residual_quadrature(const FloquetPair& pair,
                                           const EffectiveSignal& signal) {
    return std::abs(pair.lambda + signal.q_integral_quadrature / pair.period);
}

std::vector<RadiusPoint> radius_sweep(const SimulationGrid& base, const EnvironmentModel& model,
                                      const std::vector<double>& radii, FloquetOptions options) {
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
            throw ValidationError("radius_sweep: radii must be positive and increasing");
        }
    }
    const double center = 0.5 * (base.x_lo + base.x_hi);
    const double dx = base.dx();
    std::vector<std::future<RadiusPoint>> jobs;
    for (double R : radii) {
        SimulationGrid g = base;
        g.x_lo = center - R;
        g.x_hi = center + R;
        g.nx = static_cast<std::size_t>(std::llround(2.0 * R / dx)) - 1;
        jobs.push_back(std::async(std::launch::async, [g, model, options, R] {
            FloquetOptions local = options;
            local.initial_guess.reset();
            const FloquetPair pair = principal_eigenpair(g, model, local);
            const EffectiveSignal sig = effective_signals(pair, model);
            return RadiusPoint{R, pair.lambda, lambda_identity_residual(pair, sig),
                               pair.iterations};
        }));
    }
    std::vector<RadiusPoint> out;
    out.reserve(jobs.size());
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

bool lambda_nonincreasing(const std::vector<RadiusPoint>& sweep, double slack) {
    for (std::size_t i = 1; i < sweep.size(); ++i) {
        if (sweep[i].lambda > sweep[i - 1].lambda + slack) return false;
    }
    return true;
}

double tail_bound_ratio(const FloquetPair& pair, double delta, double r0, double center) {
    if (!(delta > 0.0) || !(pair.grid.sigma > 0.0)) {
        throw ValidationError("tail_bound_ratio: delta and sigma must be positive");
    }
    double sup = 0.0;
    for (const auto& s : pair.p_snapshots) sup = std::max(sup, sup_norm(s.values));
    const double rate = std::sqrt(delta / pair.grid.sigma);
    double worst = 0.0;
    for (const auto& s : pair.p_snapshots) {
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            const double d = std::abs(pair.grid.x(i) - center);
            if (d <= r0) continue;
            // Compare in the log domain; the bound underflows far out.
            if (s.values[i] <= 0.0) continue;
            const double log_ratio = std::log(s.values[i] / sup) + rate * (d - r0);
            worst = std::max(worst, std::exp(std::min(log_ratio, 700.0)));
        }
    }
    return worst;
}

double profile_gap(const OrbitRecord& orbit, const EffectiveSignal& signal) {
    if (orbit.snapshots.size() != signal.P_snapshots.size() ||
        orbit.snapshots.front().values.size() != signal.P_snapshots.front().values.size()) {
        throw ValidationError("profile_gap: orbit and eigenpair are sampled differently");
    }
    const double dx = orbit.grid.dx();
    double gap = 0.0;
    for (std::size_t k = 0; k < orbit.snapshots.size(); ++k) {
        const auto& n = orbit.snapshots[k].values;
        const auto& P = signal.P_snapshots[k].values;
        const double rho = total_mass(n, dx);
        for (std::size_t i = 0; i < n.size(); ++i) gap = std::max(gap, std::abs(n[i] / rho - P[i]));
    }
    return gap;
}

double dirichlet_ground_energy(double length) {
    const double k = std::numbers::pi / length;
    return k * k;
}

double discrete_dirichlet_ground_energy(double length, std::size_t nx) {
    const double dx = length / static_cast<double>(nx + 1);
    const double s = std::sin(std::numbers::pi * dx / (2.0 * length));
    return 4.0 / (dx * dx) * s * s;
}

}  // namespace fluctsel
