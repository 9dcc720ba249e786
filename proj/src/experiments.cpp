#include "fluctsel/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <numbers>

#include "fluctsel/asymptotics.hpp"
#include "fluctsel/errors.hpp"
#include "fluctsel/floquet.hpp"
#include "fluctsel/no_mutation.hpp"
#include "fluctsel/pde_solver.hpp"
#include "fluctsel/rho_ode.hpp"

namespace fluctsel {

namespace {

using Json = nlohmann::ordered_json;

OrbitOptions orbit_options(const RunConfig& c) {
    OrbitOptions o;
    o.orbit_tol = c.solver.orbit_tol;
    o.max_periods = c.solver.max_periods;
    o.min_steps_per_period = c.solver.min_steps_per_period;
    return o;
}

FloquetOptions floquet_options(const RunConfig& c) {
    FloquetOptions o;
    o.tol = c.solver.eigen_tol;
    o.min_steps_per_period = c.solver.min_steps_per_period;
    return o;
}

SimulationGrid with_eps(SimulationGrid g, double eps) {
    g.sigma = eps * eps;
    return g;
}

double default_tau(const RunConfig& c, const EnvironmentModel& model) {
    if (c.experiment.tau) return *c.experiment.tau;
    if (const auto* p = model.optimum_params()) return std::numbers::pi / p->b;
    if (model.pressure_params()) return 0.5;
    throw ValidationError("experiment.tau is required for this model kind");
}

// Keeps at most ~64 rows per period in long trajectories.
std::size_t row_stride(std::size_t steps_per_period) {
    return std::max<std::size_t>(1, steps_per_period / 64);
}

OrbitRecord orbit_for(const RunConfig& c, const EnvironmentModel& model, const SimulationGrid& g) {
    return find_periodic_orbit(g, model, default_initial_guess(g, model), orbit_options(c));
}

void add_orbit_tables(ResultBundle& b, const OrbitRecord& orbit) {
    Table rho{{"t", "rho"}, {}};
    for (const auto& s : orbit.rho_samples) rho.add_row({s.t, s.value});
    b.tables["orbit_rho"] = std::move(rho);
    Table snaps{{"t", "x", "n"}, {}};
    const std::size_t stride = std::max<std::size_t>(1, (orbit.snapshots.size() - 1) / 16);
    for (std::size_t k = 0; k < orbit.snapshots.size(); k += stride) {
        const auto& s = orbit.snapshots[k];
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            snaps.add_row({s.time, orbit.grid.x(i), s.values[i]});
        }
    }
    b.tables["orbit_snapshots"] = std::move(snaps);
}

Json orbit_summary(const OrbitRecord& orbit) {
    Json j;
    j["rho_mean"] = orbit.rho_mean();
    j["period_gap"] = orbit.period_gap;
    j["periods"] = orbit.periods;
    j["contraction_rate"] = orbit.contraction_rate;
    j["clipped_mass"] = orbit.clipped_mass;
    return j;
}

void sigma0_convergence(const RunConfig& c, const EnvironmentModel& model, ResultBundle& b) {
    SimulationGrid g = with_eps(build_grid(c), 0.0);
    const double x_m = optimal_trait(model, g);
    const PeriodStepping ps = period_stepping(g, model.period());
    const DensityField n0 = gaussian_field(g, x_m, c.experiment.n0_variance, 1.0);
    const Sigma0Result run = simulate_sigma0(g, model, n0, c.experiment.t_end, ps.dt);
    const PeriodicSignal q = PeriodicSignal::from_function(
        model.period(), [model, x_m](double t) { return model.rate(t, x_m); });
    const RhoOrbit tilde = periodic_rho_closed_form(q);

    const double t_final = run.rho.back().t;
    double gap = 0.0;
    Table rho{{"t", "rho", "rho_tilde"}, {}};
    const std::size_t stride = row_stride(ps.steps);
    for (std::size_t k = 0; k < run.rho.size(); ++k) {
        const auto& s = run.rho[k];
        const double rt = tilde.at(s.t);
        if (s.t >= t_final - model.period() - 1e-12) gap = std::max(gap, std::abs(s.value - rt));
        if (k % stride == 0 || k + 1 == run.rho.size()) rho.add_row({s.t, s.value, rt});
    }
    b.tables["rho"] = std::move(rho);
    const ConcentrationMetrics m = concentration_metrics(run.state, x_m, 0.1);
    Json& s = b.summary;
    s["t_end"] = t_final;
    s["x_m"] = x_m;
    s["extinct"] = run.extinct;
    s["rho_gap_final_period"] = gap;
    s["rho_tilde_mean"] = tilde.mean;
    s["mass_outside_0.1"] = m.mass_outside;
    s["mean"] = m.mean;
    s["variance"] = m.variance;
    s["argmax"] = m.argmax;
}

void periodic_orbit(const RunConfig& c, const EnvironmentModel& model, ResultBundle& b) {
    const SimulationGrid g = build_grid(c);
    const OrbitRecord orbit = orbit_for(c, model, g);
    add_orbit_tables(b, orbit);
    b.summary["orbit"] = orbit_summary(orbit);

    // Cross-check against the linear problem: P(t, x) and the periodic
    // logistic orbit driven by Q(t).
    const FloquetPair pair = principal_eigenpair(g, model, floquet_options(c));
    const EffectiveSignal sig = effective_signals(pair, model);
    const RhoOrbit predicted = periodic_rho_closed_form(sig.Q);
    double gap = 0.0;
    for (const auto& s : orbit.rho_samples) gap = std::max(gap, std::abs(s.value - predicted.at(s.t)));
    Json j;
    j["lambda"] = pair.lambda;
    j["rho_gap_vs_Q_orbit"] = gap;
    j["profile_gap_vs_P"] = profile_gap(orbit, sig);
    b.summary["floquet"] = j;
}

void floquet_sweep(const RunConfig& c, const EnvironmentModel& model, ResultBundle& b) {
    const SimulationGrid g = build_grid(c);
    const FloquetOptions fo = floquet_options(c);
    const FloquetPair pair = principal_eigenpair(g, model, fo);
    const EffectiveSignal sig = effective_signals(pair, model);
    Table q{{"t", "Q"}, {}};
    for (std::size_t k = 0; k < sig.q_samples.size(); ++k) {
        q.add_row({pair.p_snapshots[k].time, sig.q_samples[k]});
    }
    b.tables["q_signal"] = std::move(q);

    const std::vector<RadiusPoint> sweep = radius_sweep(g, model, c.experiment.radii, fo);
    Table rep{{"R", "sigma", "lambda", "identity_residual", "iterations"}, {}};
    for (const auto& p : sweep) {
        rep.add_row({p.radius, g.sigma, p.lambda, p.identity_residual,
                     static_cast<double>(p.iterations)});
    }
    b.tables["eigenreport"] = std::move(rep);

    const HypothesisReport h = check_hypotheses(model, g.domain(), pair.lambda);
    Json& s = b.summary;
    s["lambda"] = pair.lambda;
    s["iterations"] = pair.iterations;
    s["identity_residual"] = lambda_identity_residual(pair, sig);
    s["identity_residual_quadrature"] = lambda_identity_residual_quadrature(pair, sig);
    s["lambda_nonincreasing"] = lambda_nonincreasing(sweep, 10.0 * fo.tol);
    s["truncation_gap"] =
        sweep.size() >= 2 ? std::abs(sweep.back().lambda - sweep[sweep.size() - 2].lambda) : 0.0;
    s["delta"] = h.delta;
    s["r0"] = h.r0;
    s["tail_bound_ratio"] = h.h5_confining ? tail_bound_ratio(pair, h.delta, h.r0, h.x_m) : -1.0;
}

void epsilon_limit(const RunConfig& c, const EnvironmentModel& model, ResultBundle& b) {
    const SimulationGrid base = build_grid(c);
    struct Point {
        double eps, gap, rho_mean;
        std::size_t periods;
    };
    std::vector<std::future<Point>> jobs;
    for (double eps : c.experiment.eps_list) {
        jobs.push_back(std::async(std::launch::async, [&c, model, base, eps] {
            const SimulationGrid g = with_eps(base, eps);
            const OrbitRecord orbit = orbit_for(c, model, g);
            return Point{eps, hopf_cole_gap(orbit, eps, model, {-1.0, 1.0}), orbit.rho_mean(),
                         orbit.periods};
        }));
    }
    Table t{{"eps", "sup_gap", "rho_mean", "periods"}, {}};
    Json gaps = Json::array();
    std::vector<Point> pts;
    for (auto& j : jobs) pts.push_back(j.get());
    bool monotone = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        t.add_row({pts[i].eps, pts[i].gap, pts[i].rho_mean, static_cast<double>(pts[i].periods)});
        gaps.push_back(pts[i].gap);
        // Gaps must shrink with eps in the order given.
        if (i > 0 && (pts[i].eps < pts[i - 1].eps) != (pts[i].gap < pts[i - 1].gap)) monotone = false;
    }
    b.tables["epsilon_limit"] = std::move(t);
    b.summary["sup_gaps"] = gaps;
    b.summary["monotone"] = monotone;
    if (!pts.empty()) {
        const auto smallest = std::min_element(pts.begin(), pts.end(),
                                               [](const Point& a, const Point& b) { return a.eps < b.eps; });
        b.summary["gap_at_smallest_eps"] = smallest->gap;
    }
}

void moments(const RunConfig& c, const EnvironmentModel& model, ResultBundle& b,
             const OrbitRecord& orbit) {
    const double eps = c.solver.epsilon();
    const MomentReport meas = measure_moments(orbit);
    const MomentReport pred = predict_moments(model, eps, meas.t.size(), orbit.grid.domain());
    Table t{{"t", "mu", "sigma2", "rho", "mu_pred", "sigma2_pred"}, {}};
    for (std::size_t k = 0; k < meas.t.size(); ++k) {
        t.add_row({meas.t[k], meas.mu[k], meas.sigma2[k], meas.rho[k], pred.mu[k], pred.sigma2[k]});
    }
    b.tables["moments"] = std::move(t);
    const double omega = 2.0 * std::numbers::pi / orbit.period;
    const SinusoidFit fm = fit_sinusoid(meas.t, meas.mu, omega);
    const SinusoidFit fp = fit_sinusoid(pred.t, pred.mu, omega);
    Json j;
    j["mu_amplitude"] = fm.amplitude;
    j["mu_amplitude_predicted"] = fp.amplitude;
    j["mu_lag"] = fm.lag;
    j["mu_lag_predicted"] = fp.lag;
    j["sigma2_mean"] = meas.sigma2_mean;
    j["sigma2_mean_predicted"] = pred.sigma2_mean;
    j["rho_mean"] = meas.rho_mean;
    j["rho_mean_predicted"] = pred.rho_mean;
    b.summary["moments"] = j;
}

Json fitness_summary(const FitnessComparison& f) {
    Json j;
    j["tau"] = f.tau;
    j["F_p"] = f.F_p;
    j["F_p_predicted"] = f.F_p_predicted;
    j["F_c"] = f.F_c;
    j["F_c_analytic"] = f.F_c_analytic;
    j["rho_mean_p"] = f.rho_mean_p;
    j["rho_c"] = f.rho_c;
    j["sigma2_p"] = f.sigma2_p;
    j["sigma2_c"] = f.sigma2_c;
    j["variance_ordered"] = f.variance_ordered;
    j["size_ordered"] = f.size_ordered;
    j["ordering"] = f.ordering;
    Json st;
    st["rho_numeric"] = f.stationary.rho_numeric;
    if (f.stationary.rho_analytic) st["rho_analytic"] = *f.stationary.rho_analytic;
    st["sup_relative_gap"] = f.stationary.sup_relative_gap;
    j["stationary"] = st;
    return j;
}

void fitness_compare(const RunConfig& c, const EnvironmentModel& model, ResultBundle& b) {
    const SimulationGrid g = build_grid(c);
    const FitnessComparison f = fitness_comparison(model, default_tau(c, model), c.solver.epsilon(),
                                                   g, orbit_options(c), floquet_options(c));
    b.summary["fitness"] = fitness_summary(f);
    if (f.stationary.analytic) {
        Table t{{"x", "n_numeric", "n_analytic"}, {}};
        for (std::size_t i = 0; i < g.nx; ++i) {
            t.add_row({g.x(i), f.stationary.numeric.values[i], f.stationary.analytic->values[i]});
        }
        b.tables["stationary"] = std::move(t);
    }
}

void example(const RunConfig& c, const EnvironmentModel& model, ResultBundle& b) {
    const SimulationGrid g = build_grid(c);
    const OrbitRecord orbit = orbit_for(c, model, g);
    add_orbit_tables(b, orbit);
    b.summary["orbit"] = orbit_summary(orbit);
    moments(c, model, b, orbit);
    fitness_compare(c, model, b);
}

}  // namespace

ResultBundle run_experiment(const RunConfig& config) {
    validate(config);
    const std::string& tag = config.experiment.tag;
    ResultBundle b;
    b.config = config;
    b.summary["experiment"] = tag;
    const auto start = std::chrono::steady_clock::now();
    try {
        const EnvironmentModel model = build_model(config.model);
        b.summary["model"] = config.model.kind;
        b.summary["period"] = model.period();
        b.summary["sigma"] = config.solver.diffusion();
        if (tag == "sigma0-convergence") {
            sigma0_convergence(config, model, b);
        } else if (tag == "periodic-orbit") {
            periodic_orbit(config, model, b);
        } else if (tag == "floquet-sweep") {
            floquet_sweep(config, model, b);
        } else if (tag == "epsilon-limit") {
            epsilon_limit(config, model, b);
        } else if (tag == "moments") {
            const OrbitRecord orbit = orbit_for(config, model, build_grid(config));
            b.summary["orbit"] = orbit_summary(orbit);
            moments(config, model, b, orbit);
        } else if (tag == "example1" || tag == "example2") {
            example(config, model, b);
        } else if (tag == "fitness-compare") {
            fitness_compare(config, model, b);
        } else {
            throw ValidationError("unknown experiment tag '" + tag + "'");
        }
    } catch (const ExtinctionError& e) {
        throw ExtinctionError(tag + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(tag + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(tag + ": " + e.what());
    }
    b.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return b;
}

}  // namespace fluctsel
