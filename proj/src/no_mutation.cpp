#include "fluctsel/no_mutation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fluctsel/errors.hpp"

namespace fluctsel {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Mass of exp(log_n0 + log_factors - shift) with the max exponent pulled out.
double shifted_mass(const ExponentState& s, double extra_rho) {
    double top = kNegInf;
    for (std::size_t i = 0; i < s.log_n0.size(); ++i) {
        top = std::max(top, s.log_n0[i] + s.log_factors[i]);
    }
    if (top == kNegInf) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < s.log_n0.size(); ++i) {
        acc += std::exp(s.log_n0[i] + s.log_factors[i] - top);
    }
    const double log_mass = top - s.rho_integral - extra_rho + std::log(acc * s.grid.dx());
    return std::exp(log_mass);
}

}  // namespace

DensityField ExponentState::density() const {
    DensityField f;
    f.time = time;
    f.values.resize(log_n0.size());
    for (std::size_t i = 0; i < log_n0.size(); ++i) f.values[i] = std::exp(log_density(i));
    return f;
}

ExponentState initial_exponent_state(const SimulationGrid& grid, const DensityField& n0) {
    if (n0.values.size() != grid.nx) {
        throw ValidationError("simulate_sigma0: initial field size does not match grid");
    }
    ExponentState s;
    s.grid = grid;
    s.time = n0.time;
    s.log_n0.resize(grid.nx);
    s.log_factors.assign(grid.nx, 0.0);
    bool positive = false;
    for (std::size_t i = 0; i < grid.nx; ++i) {
        const double v = n0.values[i];
        if (v < 0.0 || !std::isfinite(v)) {
            throw ValidationError("simulate_sigma0: initial field must be finite and >= 0");
        }
        s.log_n0[i] = v > 0.0 ? std::log(v) : kNegInf;
        positive = positive || v > 0.0;
    }
    if (!positive) throw ValidationError("simulate_sigma0: initial field is identically 0");
    return s;
}

double exponent_mass(const ExponentState& state) { return shifted_mass(state, 0.0); }

Sigma0Result simulate_sigma0(const SimulationGrid& grid, const EnvironmentModel& model,
                             const DensityField& n0, double t_end, double dt) {
    validate(grid);
    if (!(dt > 0.0)) throw ValidationError("simulate_sigma0: dt must be positive");
    if (!(t_end >= 0.0)) throw ValidationError("simulate_sigma0: t_end must be >= 0");

    Sigma0Result out;
    out.state = initial_exponent_state(grid, n0);
    ExponentState& s = out.state;
    const std::vector<double> xs = grid.nodes();
    std::vector<double> a0(grid.nx), a1(grid.nx), a2(grid.nx);

    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    double rho = exponent_mass(s);
    out.rho.reserve(steps + 1);
    out.rho.push_back({s.time, rho});
    const double t0 = s.time;
    model.rate_profile(t0, xs, a0);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = t0 + dt * static_cast<double>(k);
        const double h = std::min(dt, t0 + t_end - t);
        model.rate_profile(t + 0.5 * h, xs, a1);
        model.rate_profile(t + h, xs, a2);
        for (std::size_t i = 0; i < grid.nx; ++i) {
            s.log_factors[i] += h / 6.0 * (a0[i] + 4.0 * a1[i] + a2[i]);
        }
        // Predictor with rho frozen at the start of the step, then the
        // trapezoid corrector.
        const double rho_pred = shifted_mass(s, h * rho);
        s.rho_integral += 0.5 * h * (rho + rho_pred);
        rho = exponent_mass(s);
        s.time = t + h;
        out.rho.push_back({s.time, rho});
        std::swap(a0, a2);
        if (!std::isfinite(rho)) throw NumericalError("simulate_sigma0: non-finite mass");
        if (rho <= 0.0) {
            out.extinct = true;
            break;
        }
    }
    return out;
}

ConcentrationMetrics concentration_metrics(const DensityField& field, const SimulationGrid& grid,
                                           double center, double radius) {
    const double dx = grid.dx();
    const double mass = total_mass(field.values, dx);
    if (!(mass > 0.0)) throw ValidationError("concentration_metrics: zero mass");
    ConcentrationMetrics m;
    double first = 0.0;
    double outside = 0.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const double w = field.values[i] * dx / mass;
        const double x = grid.x(i);
        first += w * x;
        if (std::abs(x - center) > radius) outside += w;
        if (field.values[i] > field.values[arg]) arg = i;
    }
    double second = 0.0;
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const double d = grid.x(i) - first;
        second += field.values[i] * dx / mass * d * d;
    }
    m.mean = first;
    m.variance = second;
    m.mass_outside = outside;
    m.argmax = grid.x(arg);
    return m;
}

ConcentrationMetrics concentration_metrics(const ExponentState& state, double center,
                                           double radius) {
    // Normalise in the log domain before exponentiating.
    double top = kNegInf;
    for (std::size_t i = 0; i < state.log_n0.size(); ++i) top = std::max(top, state.log_density(i));
    if (top == kNegInf) throw ValidationError("concentration_metrics: zero mass");
    DensityField f;
    f.time = state.time;
    f.values.resize(state.log_n0.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        f.values[i] = std::exp(state.log_density(i) - top);
    }
    return concentration_metrics(f, state.grid, center, radius);
}

}  // namespace fluctsel
