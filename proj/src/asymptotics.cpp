#include "fluctsel/asymptotics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fluctsel/errors.hpp"
#include "fluctsel/quadrature.hpp"

namespace fluctsel {

namespace {

constexpr double kRadicandTol = 1e-12;
constexpr double kMaxCell = 0.05;  // widest Gauss-Legendre cell for the phase integral

bool builtin_quadratic(const EnvironmentModel& model) {
    return model.kind() == ModelKind::oscillating_optimum ||
           model.kind() == ModelKind::oscillating_pressure;
}

double optimum_of(const EnvironmentModel& model, Interval bracket) {
    if (model.analytic()) return model.analytic()->optimum;
    return locate_optimum(model, bracket);
}

double radicand_root(const EnvironmentModel& model, double rho_bar, double y) {
    const double r = rho_bar - mean_growth(model, y);
    if (r < -kRadicandTol) {
        throw ValidationError("H2/limit inconsistency: rho_bar < abar(" + std::to_string(y) + ")");
    }
    return std::sqrt(std::max(r, 0.0));
}

// int_a^b sqrt(rho_bar - abar) split into cells no wider than kMaxCell.
double phase_increment(const EnvironmentModel& model, double rho_bar, double a, double b) {
    const double width = std::abs(b - a);
    if (width == 0.0) return 0.0;
    const auto cells = static_cast<std::size_t>(std::ceil(width / kMaxCell));
    const double h = (b - a) / static_cast<double>(cells);
    double acc = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
        const double lo = a + h * static_cast<double>(c);
        acc += quad::gauss_legendre5(
            [&](double y) { return radicand_root(model, rho_bar, y); }, lo, lo + h);
    }
    return acc;
}

// Five-point central stencils at offsets -2h .. 2h.
struct Stencil {
    double d1, d2, d3, d4;
};
Stencil five_point(const std::array<double, 5>& f, double h) {
    return {(f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h),
            (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h),
            (-f[0] + 2.0 * f[1] - 2.0 * f[3] + f[4]) / (2.0 * h * h * h),
            (f[0] - 4.0 * f[1] + 6.0 * f[2] - 4.0 * f[3] + f[4]) / (h * h * h * h)};
}

// Cumulative int_0^{t_k} f over k = 0..n on the uniform lattice t_k = k T / n,
// Simpson with `sub` (even) subintervals per lattice cell.
template <class F>
std::vector<double> cumulative_time_integral(F&& f, double period, std::size_t n,
                                             std::size_t sub = 8) {
    std::vector<double> out(n + 1, 0.0);
    const double h = period / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t0 = h * static_cast<double>(k);
        out[k + 1] = out[k] + quad::simpson(f, t0, t0 + h, sub);
    }
    return out;
}

double periodic_mean_of(const std::vector<double>& with_endpoint) {
    return quad::periodic_mean(std::span<const double>(with_endpoint.data(),
                                                       with_endpoint.size() - 1));
}

}  // namespace

std::vector<double> hopf_cole(const DensityField& field, double eps) {
    if (!(eps > 0.0)) throw ValidationError("hopf_cole: eps must be positive");
    bool positive = false;
    for (double v : field.values) positive = positive || v > 0.0;
    if (!positive) throw ValidationError("hopf_cole: all-zero field");
    const double shift = 0.5 * std::log(2.0 * std::numbers::pi * eps);
    std::vector<double> u(field.values.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = eps * (std::log(std::max(field.values[i], 1e-300)) + shift);
    }
    return u;
}

double limit_phase(const EnvironmentModel& model, double rho_bar, double x_m, double x) {
    return -std::abs(phase_increment(model, rho_bar, x_m, x));
}

TaylorCoefficients taylor_coefficients_fd(const EnvironmentModel& model, double rho_bar,
                                          double x_m, double step) {
    std::array<double, 5> u{};
    for (int j = -2; j <= 2; ++j) {
        u[static_cast<std::size_t>(j + 2)] = limit_phase(model, rho_bar, x_m, x_m + j * step);
    }
    const Stencil s = five_point(u, step);
    return {-s.d2, s.d3 / 6.0, s.d4 / 24.0};
}

LimitProfile limit_profile(const EnvironmentModel& model, double rho_bar,
                           std::span<const double> xs, double fd_step) {
    LimitProfile prof;
    prof.rho_bar = rho_bar;
    if (model.analytic()) {
        prof.x_m = model.analytic()->optimum;
    } else {
        if (xs.empty()) throw ValidationError("limit_profile: no trait values");
        const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
        prof.x_m = locate_optimum(model, {*lo, *hi});
    }
    prof.x.assign(xs.begin(), xs.end());
    prof.u.assign(xs.size(), 0.0);

    // Accumulate outward from x_m in sorted order on each side.
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    double pos = prof.x_m;
    double acc = 0.0;
    for (std::size_t i : order) {
        if (xs[i] < prof.x_m) continue;
        acc += phase_increment(model, rho_bar, pos, xs[i]);
        pos = xs[i];
        prof.u[i] = -acc;
    }
    pos = prof.x_m;
    acc = 0.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::size_t i = *it;
        if (xs[i] >= prof.x_m) continue;
        acc += phase_increment(model, rho_bar, xs[i], pos);
        pos = xs[i];
        prof.u[i] = -acc;
    }

    if (builtin_quadratic(model)) {
        prof.taylor = {std::sqrt(-model.analytic()->curvature / 2.0), 0.0, 0.0};
    } else {
        prof.taylor = taylor_coefficients_fd(model, rho_bar, prof.x_m, fd_step);
    }
    return prof;
}

LimitProfile limit_profile(const EnvironmentModel& model, const SimulationGrid& grid) {
    const std::vector<double> xs = grid.nodes();
    const double x_m = optimal_trait(model, grid);
    return limit_profile(model, mean_growth(model, x_m), xs, 10.0 * grid.dx());
}

double Corrector::v(double t, double x) const {
    const EnvironmentModel& model = *this->model;
    const double T = period;
    double tau = std::fmod(t, T);
    if (tau < 0.0) tau += T;
    const std::size_t n = this->t.size();
    const std::size_t sub = 8;
    auto rate_diff = [&](double s) { return model.rate(s, x) - model.rate(s, x_m); };
    const double abar_diff = mean_growth(model, x) - mean_growth(model, x_m);

    // v(t, x_m) part.
    const double a_m = quad::simpson([&](double s) { return model.rate(s, x_m); }, 0.0, tau,
                                     sub * n);
    const double rho_int = quad::simpson([&](double s) { return rho_orbit.at(s); }, 0.0, tau,
                                         sub * n);
    const double v_m = a_m - rho_int - tau * (mean_growth(model, x_m) - rho_bar);

    // x-dependent part: v_p(t, x) - v_p(t, x_m) minus its time mean, plus
    // the integral of the prescribed mean gradient.
    const std::vector<double> cum = cumulative_time_integral(rate_diff, T, n, sub);
    std::vector<double> diff(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        diff[k] = cum[k] - (T * static_cast<double>(k) / static_cast<double>(n)) * abar_diff;
    }
    const double diff_mean = periodic_mean_of(diff);
    const double diff_now = quad::simpson(rate_diff, 0.0, tau, sub * n) - tau * abar_diff;

    double F = 0.0;
    if (!builtin_quadratic(model) && x != x_m) {
        // f = (kappa_bar - u'') / (2 u'), with its limit 3B/A at x_m.
        const double A = taylor.A;
        auto f = [&](double y) {
            const double s = y - x_m;
            if (std::abs(s) < 1e-3) {
                return 3.0 * taylor.B / A + s * (6.0 * taylor.C / A + 9.0 * taylor.B * taylor.B / (A * A));
            }
            const double root = radicand_root(model, mean_growth(model, x_m), y);
            const double sign = s > 0.0 ? 1.0 : -1.0;
            const double du = -sign * root;
            const double h = 1e-5;
            const double dabar = (mean_growth(model, y + h) - mean_growth(model, y - h)) / (2.0 * h);
            const double d2u = sign * dabar / (2.0 * root);
            return (kappa_bar - d2u) / (2.0 * du);
        };
        const auto cells = static_cast<std::size_t>(std::ceil(std::abs(x - x_m) / kMaxCell));
        const double h = (x - x_m) / static_cast<double>(cells);
        for (std::size_t c = 0; c < cells; ++c) {
            const double lo = x_m + h * static_cast<double>(c);
            F += quad::gauss_legendre5(f, lo, lo + h);
        }
    }
    return v_m + diff_now - diff_mean + F;
}

double Corrector::mean_dx_v(double x, double h) const {
    double acc = 0.0;
    for (double tk : t) acc += (v(tk, x + h) - v(tk, x - h)) / (2.0 * h);
    return acc / static_cast<double>(t.size());
}

Corrector corrector(const EnvironmentModel& model, const RhoOrbit& rho_orbit,
                    std::size_t samples, Interval bracket) {
    if (std::abs(rho_orbit.period - model.period()) > 1e-12 * model.period()) {
        throw ValidationError("corrector: rho orbit period does not match the model period");
    }
    if (samples < 8) throw ValidationError("corrector: need at least 8 samples");
    Corrector c;
    c.model = model;
    c.rho_orbit = rho_orbit;
    c.period = model.period();
    c.x_m = optimum_of(model, bracket);
    c.rho_bar = rho_orbit.mean;
    const double abar_m = mean_growth(model, c.x_m);
    if (builtin_quadratic(model)) {
        c.taylor = {std::sqrt(-model.analytic()->curvature / 2.0), 0.0, 0.0};
    } else {
        c.taylor = taylor_coefficients_fd(model, abar_m, c.x_m, 0.1);
    }
    c.kappa_bar = -c.taylor.A;
    const double A = c.taylor.A;
    const double B = c.taylor.B;
    const double C = c.taylor.C;

    // x-derivatives of v_p(t, x) = int_0^t a(s, x) ds - t abar(x) + (terms free of x)
    // by five-point differences at x_m.
    const double h = 1e-2;
    const std::size_t n = samples;
    std::array<std::vector<double>, 5> vp;
    for (int j = -2; j <= 2; ++j) {
        const double x = c.x_m + j * h;
        auto& col = vp[static_cast<std::size_t>(j + 2)];
        col = cumulative_time_integral([&](double s) { return model.rate(s, x); }, c.period, n);
        const double abar = mean_growth(model, x);
        for (std::size_t k = 0; k <= n; ++k) {
            col[k] -= c.period * static_cast<double>(k) / static_cast<double>(n) * abar;
        }
    }
    std::vector<double> d1(n + 1), d2(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const Stencil s = five_point({vp[0][k], vp[1][k], vp[2][k], vp[3][k], vp[4][k]}, h);
        d1[k] = s.d1;
        d2[k] = s.d2;
    }
    const double m1 = periodic_mean_of(d1);
    const double m2 = periodic_mean_of(d2);
    c.t.resize(n);
    c.D.resize(n);
    c.E.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        c.t[k] = c.period * static_cast<double>(k) / static_cast<double>(n);
        c.D[k] = d1[k] - m1 + 3.0 * B / A;
        c.E[k] = 0.5 * (d2[k] - m2 + 6.0 * C / A + 9.0 * B * B / (A * A));
    }
    c.D_signal = PeriodicSignal::from_samples(c.period, c.D);
    c.E_signal = PeriodicSignal::from_samples(c.period, c.E);
    return c;
}

double gaussian_moment_expansion(int k, const TaylorCoefficients& tc, double D, double E,
                                 double eps, double x_m) {
    const double A = tc.A;
    const double B = tc.B;
    const double C = tc.C;
    if (!(A > 0.0)) throw ValidationError("gaussian_moment_expansion: A must be positive");
    switch (k) {
    case 0:
        return (1.0 + eps * (15.0 * B * B / (2.0 * A * A * A) + 3.0 * (C + B * D) / (A * A) +
                             (E + 0.5 * D * D) / A)) /
               std::sqrt(A);
    case 1:
        return x_m + eps * (3.0 * B / (A * A) + D / A);
    case 2:
        return eps / A;
    case 3:
        return 6.0 * B * eps * eps / (A * A * A);
    case 4:
        return 3.0 * eps * eps / (A * A);
    default:
        throw ValidationError("gaussian_moment_expansion: moment order " + std::to_string(k) +
                              " is beyond the expansion (k <= 4)");
    }
}

std::string to_string(MomentSource source) {
    return source == MomentSource::simulated ? "simulated" : "asymptotic";
}

MomentReport predict_moments(const EnvironmentModel& model, double eps, std::size_t samples,
                             Interval bracket) {
    if (!(eps >= 0.0)) throw ValidationError("predict_moments: eps must be >= 0");
    if (samples == 0) throw ValidationError("predict_moments: need at least one sample");
    MomentReport rep;
    rep.source = MomentSource::asymptotic;
    rep.period = model.period();
    rep.t.resize(samples);
    rep.mu.resize(samples);
    rep.sigma2.resize(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        rep.t[k] = rep.period * static_cast<double>(k) / static_cast<double>(samples);
    }
    const double x_m = optimum_of(model, bracket);
    const double abar_m = mean_growth(model, x_m);

    if (const auto* p = model.optimum_params()) {
        const double sg = std::sqrt(p->g);
        const double amp = 2.0 * eps * p->c * sg / p->b;
        for (std::size_t k = 0; k < samples; ++k) {
            rep.mu[k] = amp * std::sin(p->b * rep.t[k] - std::numbers::pi / 2.0);
            rep.sigma2[k] = eps / sg;
        }
        rep.rho_mean = abar_m - eps * sg;
    } else if (const auto* p = model.pressure_params()) {
        const double sg = std::sqrt(p->g_mean);
        std::fill(rep.mu.begin(), rep.mu.end(), 0.0);
        std::fill(rep.sigma2.begin(), rep.sigma2.end(), eps / sg);
        rep.rho_mean = abar_m - eps * sg;
    } else {
        const PeriodicSignal q = PeriodicSignal::from_function(
            model.period(), [model, x_m](double t) { return model.rate(t, x_m); });
        const Corrector c = corrector(model, periodic_rho_closed_form(q), samples, bracket);
        for (std::size_t k = 0; k < samples; ++k) {
            rep.mu[k] = gaussian_moment_expansion(1, c.taylor, c.D[k], c.E[k], eps, x_m);
            rep.sigma2[k] = gaussian_moment_expansion(2, c.taylor, c.D[k], c.E[k], eps, x_m);
        }
        rep.rho_mean = abar_m + eps * c.kappa_bar;
    }
    rep.mu_mean = quad::periodic_mean(rep.mu);
    rep.sigma2_mean = quad::periodic_mean(rep.sigma2);
    return rep;
}

MomentReport measure_moments(const OrbitRecord& orbit) {
    if (orbit.snapshots.size() < 2) throw ValidationError("measure_moments: empty orbit");
    MomentReport rep;
    rep.source = MomentSource::simulated;
    rep.period = orbit.period;
    const std::vector<double> xs = orbit.grid.nodes();
    const double dx = orbit.grid.dx();
    const std::size_t n = orbit.snapshots.size() - 1;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& v = orbit.snapshots[k].values;
        double m0 = 0.0;
        double m1 = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            m0 += v[i];
            m1 += v[i] * xs[i];
        }
        if (!(m0 > 0.0)) throw NumericalError("measure_moments: zero-mass snapshot");
        const double mu = m1 / m0;
        double m2 = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) m2 += v[i] * (xs[i] - mu) * (xs[i] - mu);
        rep.t.push_back(orbit.snapshots[k].time);
        rep.rho.push_back(m0 * dx);
        rep.mu.push_back(mu);
        rep.sigma2.push_back(m2 / m0);
    }
    rep.rho_mean = quad::periodic_mean(rep.rho);
    rep.mu_mean = quad::periodic_mean(rep.mu);
    rep.sigma2_mean = quad::periodic_mean(rep.sigma2);
    return rep;
}

SinusoidFit fit_sinusoid(std::span<const double> t, std::span<const double> y, double omega) {
    if (t.size() != y.size() || t.size() < 3) {
        throw ValidationError("fit_sinusoid: need at least 3 matching samples");
    }
    // Normal equations for y = c0 + alpha sin(omega t) + beta cos(omega t).
    std::array<std::array<double, 4>, 3> m{};
    for (std::size_t k = 0; k < t.size(); ++k) {
        const std::array<double, 3> b{1.0, std::sin(omega * t[k]), std::cos(omega * t[k])};
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) m[i][j] += b[i] * b[j];
            m[i][3] += b[i] * y[k];
        }
    }
    for (std::size_t col = 0; col < 3; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < 3; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        }
        std::swap(m[col], m[piv]);
        if (std::abs(m[col][col]) < 1e-300) throw NumericalError("fit_sinusoid: singular system");
        for (std::size_t r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (std::size_t j = col; j < 4; ++j) m[r][j] -= f * m[col][j];
        }
    }
    const double c0 = m[0][3] / m[0][0];
    const double alpha = m[1][3] / m[1][1];
    const double beta = m[2][3] / m[2][2];
    SinusoidFit fit;
    fit.offset = c0;
    fit.amplitude = std::hypot(alpha, beta);
    fit.lag = std::atan2(-beta, alpha);
    double ss = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double r = y[k] - (c0 + alpha * std::sin(omega * t[k]) + beta * std::cos(omega * t[k]));
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(t.size()));
    return fit;
}

double mean_fitness(const OrbitRecord& orbit, const EnvironmentModel& model, double tau) {
    if (orbit.snapshots.size() < 2) throw ValidationError("mean_fitness: empty orbit");
    const std::vector<double> xs = orbit.grid.nodes();
    const double dx = orbit.grid.dx();
    const std::size_t n = orbit.snapshots.size() - 1;
    std::vector<double> avg(xs.size(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& v = orbit.snapshots[k].values;
        const double rho = total_mass(v, dx);
        if (!(rho > 0.0)) throw NumericalError("mean_fitness: zero-mass snapshot");
        for (std::size_t i = 0; i < xs.size(); ++i) avg[i] += v[i] / rho;
    }
    std::vector<double> a(xs.size());
    model.rate_profile(tau, xs, a);
    double F = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) F += a[i] * avg[i];
    return F * dx / static_cast<double>(n);
}

double hopf_cole_gap(const OrbitRecord& orbit, double eps, const EnvironmentModel& model,
                     Interval window) {
    const std::vector<double> nodes = orbit.grid.nodes();
    std::vector<double> xs;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (window.contains(nodes[i])) {
            xs.push_back(nodes[i]);
            idx.push_back(i);
        }
    }
    if (xs.empty()) throw ValidationError("hopf_cole_gap: window contains no grid node");
    const double x_m = optimal_trait(model, orbit.grid);
    const LimitProfile prof = limit_profile(model, mean_growth(model, x_m), xs);
    double gap = 0.0;
    for (const auto& snap : orbit.snapshots) {
        const std::vector<double> u = hopf_cole(snap, eps);
        for (std::size_t j = 0; j < idx.size(); ++j) {
            gap = std::max(gap, std::abs(u[idx[j]] - prof.u[j]));
        }
    }
    return gap;
}

StationaryComparison stationary_constant_env(const EnvironmentModel& model, double tau,
                                             double eps, const SimulationGrid& grid,
                                             FloquetOptions options) {
    if (!(eps > 0.0)) throw ValidationError("stationary_constant_env: eps must be positive");
    StationaryComparison out;
    out.tau = tau;
    out.eps = eps;
    const auto quadratic = model.frozen_quadratic(tau);
    if (quadratic && !(quadratic->g > 0.0)) {
        throw ValidationError("stationary_constant_env: frozen rate is not confining");
    }
    SimulationGrid g = grid;
    g.sigma = eps * eps;
    const EnvironmentModel frozen = model.frozen(tau);
    const FloquetPair pair = principal_eigenpair(g, frozen, options);
    out.rho_numeric = -pair.lambda;
    if (!(out.rho_numeric > 0.0)) {
        throw ValidationError(
            "stationary_constant_env: frozen rate is not confining (no positive stationary state)");
    }
    const double dx = g.dx();
    const auto& p = pair.p_snapshots.front().values;
    const double mass = total_mass(p, dx);
    out.numeric.time = 0.0;
    out.numeric.values.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out.numeric.values[i] = out.rho_numeric * p[i] / mass;

    double m1 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) m1 += g.x(i) * p[i];
    out.mean = m1 * dx / mass;
    double m2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) m2 += (g.x(i) - out.mean) * (g.x(i) - out.mean) * p[i];
    out.variance = m2 * dx / mass;

    if (quadratic) {
        const double sg = std::sqrt(quadratic->g);
        const double rho_c = quadratic->r - eps * sg;
        out.rho_analytic = rho_c;
        DensityField an;
        an.values.resize(p.size());
        const double pref = rho_c * std::pow(quadratic->g, 0.25) / std::sqrt(2.0 * std::numbers::pi * eps);
        double gap = 0.0;
        double top = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double s = g.x(i) - quadratic->center;
            an.values[i] = pref * std::exp(-sg * s * s / (2.0 * eps));
            gap = std::max(gap, std::abs(out.numeric.values[i] - an.values[i]));
            top = std::max(top, an.values[i]);
        }
        out.sup_relative_gap = top > 0.0 ? gap / top : gap;
        out.analytic = std::move(an);
    }
    return out;
}

FitnessComparison fitness_comparison(const EnvironmentModel& model, double tau, double eps,
                                     const SimulationGrid& grid, OrbitOptions orbit_opts,
                                     FloquetOptions floquet) {
    const auto quadratic = model.frozen_quadratic(tau);
    if (!quadratic) {
        throw ValidationError("fitness_comparison: requires a builtin quadratic model");
    }
    FitnessComparison fc;
    fc.tau = tau;
    fc.eps = eps;
    SimulationGrid g = grid;
    g.sigma = eps * eps;

    const OrbitRecord orbit = find_periodic_orbit(g, model, default_initial_guess(g, model), orbit_opts);
    fc.F_p = mean_fitness(orbit, model, tau);
    fc.rho_mean_p = orbit.rho_mean();
    fc.sigma2_p = measure_moments(orbit).sigma2_mean;

    const StationaryComparison st = stationary_constant_env(model, tau, eps, g, floquet);
    const std::vector<double> xs = g.nodes();
    std::vector<double> a(xs.size());
    model.rate_profile(tau, xs, a);
    double F = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) F += a[i] * st.numeric.values[i];
    fc.F_c = F * g.dx() / st.rho_numeric;
    fc.F_c_analytic = quadratic->r - eps * std::sqrt(quadratic->g);
    fc.rho_c = st.rho_numeric;
    fc.sigma2_c = st.variance;
    fc.stationary = st;

    const double A = std::sqrt(-model.analytic()->curvature / 2.0);
    fc.F_p_predicted = quadratic->r - quadratic->g * eps / A;

    fc.fitness_ordered = fc.F_c < fc.F_p;
    fc.variance_ordered = fc.sigma2_p < fc.sigma2_c;
    fc.size_ordered = fc.rho_mean_p < fc.rho_c;
    fc.ordering = fc.fitness_ordered ? "F_c < F_p" : "F_c >= F_p";
    return fc;
}

}  // namespace fluctsel
