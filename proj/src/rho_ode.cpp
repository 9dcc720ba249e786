#include "fluctsel/rho_ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fluctsel/errors.hpp"
#include "fluctsel/quadrature.hpp"

namespace fluctsel {

namespace {

double rhs(const PeriodicSignal& q, double t, double rho) { return rho * (q(t) - rho); }

double rk4_step(const PeriodicSignal& q, double t, double rho, double h) {
    const double k1 = rhs(q, t, rho);
    const double k2 = rhs(q, t + 0.5 * h, rho + 0.5 * h * k1);
    const double k3 = rhs(q, t + 0.5 * h, rho + 0.5 * h * k2);
    const double k4 = rhs(q, t + h, rho + h * k3);
    return rho + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Advances by h, halving internally while positivity fails.
double positive_step(const PeriodicSignal& q, double t, double rho, double h) {
    double next = rk4_step(q, t, rho, h);
    if (next > 0.0 && std::isfinite(next)) return next;
    int depth = 0;
    double sub = h;
    for (;;) {
        if (++depth > 40) throw NumericalError("integrate_logistic: cannot keep rho positive");
        sub *= 0.5;
        double r = rho;
        double tt = t;
        bool ok = true;
        for (double done = 0.0; done < h - 0.5 * sub; done += sub) {
            r = rk4_step(q, tt, r, sub);
            tt += sub;
            if (!(r > 0.0) || !std::isfinite(r)) {
                ok = false;
                break;
            }
        }
        if (ok) return r;
    }
}

RhoOrbit make_orbit(const PeriodicSignal& q, std::vector<TimeValue> samples) {
    RhoOrbit orbit;
    orbit.period = q.period();
    orbit.slopes.reserve(samples.size());
    for (const auto& s : samples) orbit.slopes.push_back(rhs(q, s.t, s.value));
    orbit.samples = std::move(samples);
    orbit.mean = orbit_mean(orbit);
    return orbit;
}

}  // namespace

double RhoOrbit::at(double t) const {
    const std::size_t n = samples.size() - 1;
    if (n == 0) return samples.front().value;
    double u = std::fmod(t, period);
    if (u < 0.0) u += period;
    const double h = period / static_cast<double>(n);
    auto k = static_cast<std::size_t>(std::floor(u / h));
    if (k >= n) k = n - 1;
    const double s = u / h - static_cast<double>(k);
    const double y0 = samples[k].value;
    const double y1 = samples[k + 1].value;
    const double m0 = slopes[k] * h;
    const double m1 = slopes[k + 1] * h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * m1;
}

RhoOrbit periodic_rho_closed_form(const PeriodicSignal& q, ClosedFormOptions opts) {
    const double T = q.period();
    const std::size_t n_out = std::max<std::size_t>(opts.samples, 2);
    std::size_t fine = std::max(opts.fine_nodes, n_out);
    fine = (fine / n_out) * n_out;  // output samples sit on fine nodes
    const double h = T / static_cast<double>(fine);

    // Antiderivative of q over two periods.
    std::vector<double> qv(2 * fine + 1);
    for (std::size_t i = 0; i <= 2 * fine; ++i) qv[i] = q(h * static_cast<double>(i));
    const std::vector<double> phi = quad::cumulative_trapezoid(qv, h);
    const double total = phi[fine];
    if (!(total > 0.0)) {
        std::ostringstream msg;
        msg << "extinction regime: no positive periodic orbit (int_0^T q = " << total << ")";
        throw ExtinctionError(msg.str());
    }

    // G(s) = int_0^s exp(phi - shift), integrating the exponential exactly
    // on each cell where phi is linear. The shift keeps exponentials finite.
    const double shift = *std::max_element(phi.begin(), phi.end());
    std::vector<double> G(phi.size(), 0.0);
    for (std::size_t i = 1; i < phi.size(); ++i) {
        const double d = phi[i] - phi[i - 1];
        const double rel = (std::abs(d) < 1e-300) ? 1.0 : std::expm1(d) / d;
        G[i] = G[i - 1] + h * std::exp(phi[i - 1] - shift) * rel;
    }

    const double numer = -std::expm1(-total);  // 1 - e^{-I}
    std::vector<TimeValue> samples;
    samples.reserve(n_out + 1);
    const std::size_t stride = fine / n_out;
    for (std::size_t j = 0; j <= n_out; ++j) {
        const std::size_t i = j * stride;
        const double window = std::exp(shift - phi[i]) * (G[i + fine] - G[i]);
        const double rho = numer / (std::exp(-total) * window);
        samples.push_back({h * static_cast<double>(i), rho});
    }
    return make_orbit(q, std::move(samples));
}

std::vector<TimeValue> integrate_logistic(const PeriodicSignal& q, double rho0, double t_end,
                                          double dt) {
    if (!(rho0 > 0.0)) throw ValidationError("integrate_logistic: rho0 must be positive");
    if (!(dt > 0.0)) throw ValidationError("integrate_logistic: dt must be positive");
    if (!(t_end >= 0.0)) throw ValidationError("integrate_logistic: t_end must be >= 0");
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    std::vector<TimeValue> out;
    out.reserve(steps + 1);
    out.push_back({0.0, rho0});
    double rho = rho0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = dt * static_cast<double>(k);
        const double h = std::min(dt, t_end - t);
        rho = positive_step(q, t, rho, h);
        out.push_back({std::min(t + dt, t_end), rho});
    }
    return out;
}

std::pair<RhoOrbit, std::size_t> converge_logistic(const PeriodicSignal& q, double rho0,
                                                   std::size_t steps_per_period, double tol,
                                                   std::size_t max_periods) {
    if (!(rho0 > 0.0)) throw ValidationError("converge_logistic: rho0 must be positive");
    const double T = q.period();
    const double dt = T / static_cast<double>(steps_per_period);
    std::vector<TimeValue> prev;
    std::vector<TimeValue> cur(steps_per_period + 1);
    double rho = rho0;
    for (std::size_t p = 1; p <= max_periods; ++p) {
        cur[0] = {0.0, rho};
        for (std::size_t k = 0; k < steps_per_period; ++k) {
            const double t = dt * static_cast<double>(k);
            rho = positive_step(q, t, rho, dt);
            cur[k + 1] = {t + dt, rho};
        }
        if (rho < 1e-300) throw ExtinctionError("converge_logistic: rho decays to zero");
        if (!prev.empty()) {
            double gap = 0.0;
            double top = 0.0;
            for (std::size_t k = 0; k < cur.size(); ++k) {
                gap = std::max(gap, std::abs(cur[k].value - prev[k].value));
                top = std::max(top, cur[k].value);
            }
            if (gap < tol * top) return {make_orbit(q, cur), p};
        }
        prev = cur;
    }
    throw NumericalError("converge_logistic: no convergence within max_periods");
}

double orbit_mean(const RhoOrbit& orbit) {
    if (orbit.samples.size() < 2) return orbit.samples.empty() ? 0.0 : orbit.samples[0].value;
    std::vector<double> v;
    v.reserve(orbit.samples.size() - 1);
    for (std::size_t i = 0; i + 1 < orbit.samples.size(); ++i) v.push_back(orbit.samples[i].value);
    return quad::periodic_mean(v);
}

}  // namespace fluctsel
