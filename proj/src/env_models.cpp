#include "fluctsel/env_models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <variant>

#include "fluctsel/errors.hpp"
#include "fluctsel/quadrature.hpp"

namespace fluctsel {

namespace detail {

struct ModelData {
    ModelKind kind = ModelKind::custom;
    double period = 1.0;
    std::variant<OptimumParams, PressureParams, TabulatedSamples, EnvironmentModel::RateFn> params;
    std::optional<AnalyticInfo> analytic;
    bool time_independent = false;
    double offset = 0.0;
};

}  // namespace detail

namespace {

double tabulated_rate(const TabulatedSamples& s, double t, double x) {
    double tau = std::fmod(t, s.period);
    if (tau < 0.0) tau += s.period;
    const double ft = tau / s.period * static_cast<double>(s.nt);
    auto it0 = static_cast<std::size_t>(std::floor(ft));
    const double wt = ft - static_cast<double>(it0);
    it0 %= s.nt;
    const std::size_t it1 = (it0 + 1) % s.nt;

    const double xc = std::clamp(x, s.x_lo, s.x_hi);
    const double fx = (xc - s.x_lo) / (s.x_hi - s.x_lo) * static_cast<double>(s.nx - 1);
    auto ix0 = static_cast<std::size_t>(std::floor(fx));
    if (ix0 >= s.nx - 1) ix0 = s.nx - 2;
    const double wx = fx - static_cast<double>(ix0);
    const std::size_t ix1 = ix0 + 1;

    auto at = [&](std::size_t it, std::size_t ix) { return s.values[it * s.nx + ix]; };
    const double lo = (1.0 - wx) * at(it0, ix0) + wx * at(it0, ix1);
    const double hi = (1.0 - wx) * at(it1, ix0) + wx * at(it1, ix1);
    return (1.0 - wt) * lo + wt * hi;
}

std::shared_ptr<detail::ModelData> clone(const detail::ModelData& d) {
    return std::make_shared<detail::ModelData>(d);
}

}  // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::oscillating_optimum: return "oscillating_optimum";
        case ModelKind::oscillating_pressure: return "oscillating_pressure";
        case ModelKind::tabulated: return "tabulated";
        case ModelKind::custom: return "custom";
    }
    return "custom";
}

EnvironmentModel::EnvironmentModel(std::shared_ptr<const detail::ModelData> data)
    : data_(std::move(data)) {}

EnvironmentModel EnvironmentModel::custom(double period, RateFn rate,
                                          std::optional<AnalyticInfo> info,
                                          bool time_independent) {
    if (!(period > 0.0)) throw ValidationError("custom model: period must be positive");
    if (!rate) throw ValidationError("custom model: empty rate function");
    auto d = std::make_shared<detail::ModelData>();
    d->kind = ModelKind::custom;
    d->period = period;
    d->params = std::move(rate);
    d->analytic = std::move(info);
    d->time_independent = time_independent;
    return EnvironmentModel(std::move(d));
}

double EnvironmentModel::period() const { return data_->period; }
ModelKind EnvironmentModel::kind() const { return data_->kind; }
const std::optional<AnalyticInfo>& EnvironmentModel::analytic() const { return data_->analytic; }
bool EnvironmentModel::time_independent() const { return data_->time_independent; }
double EnvironmentModel::offset() const { return data_->offset; }

const OptimumParams* EnvironmentModel::optimum_params() const {
    return std::get_if<OptimumParams>(&data_->params);
}
const PressureParams* EnvironmentModel::pressure_params() const {
    return std::get_if<PressureParams>(&data_->params);
}
const TabulatedSamples* EnvironmentModel::tabulated_samples() const {
    return std::get_if<TabulatedSamples>(&data_->params);
}

double EnvironmentModel::rate(double t, double x) const {
    const auto& d = *data_;
    switch (d.params.index()) {
        case 0: {
            const auto& p = std::get<OptimumParams>(d.params);
            const double y = x - p.c * std::sin(p.b * t);
            return p.r - p.g * y * y + d.offset;
        }
        case 1: {
            const auto& p = std::get<PressureParams>(d.params);
            return p.r - p.g(t) * x * x + d.offset;
        }
        case 2: return tabulated_rate(std::get<TabulatedSamples>(d.params), t, x) + d.offset;
        default: return std::get<RateFn>(d.params)(t, x) + d.offset;
    }
}

void EnvironmentModel::rate_profile(double t, std::span<const double> xs,
                                    std::span<double> out) const {
    const auto& d = *data_;
    const std::size_t n = std::min(xs.size(), out.size());
    if (const auto* p = std::get_if<OptimumParams>(&d.params)) {
        const double centre = p->c * std::sin(p->b * t);
        const double base = p->r + d.offset;
        for (std::size_t i = 0; i < n; ++i) {
            const double y = xs[i] - centre;
            out[i] = base - p->g * y * y;
        }
    } else if (const auto* p = std::get_if<PressureParams>(&d.params)) {
        const double g = p->g(t);
        const double base = p->r + d.offset;
        for (std::size_t i = 0; i < n; ++i) out[i] = base - g * xs[i] * xs[i];
    } else {
        for (std::size_t i = 0; i < n; ++i) out[i] = rate(t, xs[i]);
    }
}

EnvironmentModel EnvironmentModel::shifted(double delta) const {
    auto d = clone(*data_);
    d->offset += delta;
    if (d->analytic) {
        auto base = d->analytic->mean_rate;
        d->analytic->mean_rate = [base, delta](double x) { return base(x) + delta; };
    }
    return EnvironmentModel(std::move(d));
}

std::optional<FrozenQuadratic> EnvironmentModel::frozen_quadratic(double tau) const {
    if (const auto* p = optimum_params()) {
        return FrozenQuadratic{p->r + offset(), p->g, p->c * std::sin(p->b * tau)};
    }
    if (const auto* p = pressure_params()) {
        return FrozenQuadratic{p->r + offset(), p->g(tau), 0.0};
    }
    return std::nullopt;
}

EnvironmentModel EnvironmentModel::frozen(double tau) const {
    std::optional<AnalyticInfo> info;
    if (auto q = frozen_quadratic(tau)) {
        const FrozenQuadratic fq = *q;
        info = AnalyticInfo{
            [fq](double x) { return fq.r - fq.g * (x - fq.center) * (x - fq.center); },
            fq.center, -2.0 * fq.g};
    }
    EnvironmentModel self = *this;
    return custom(1.0, [self, tau](double, double x) { return self.rate(tau, x); },
                  std::move(info), true);
}

EnvironmentModel make_oscillating_optimum(double r, double g, double c, double b) {
    if (!(g > 0.0)) throw ValidationError("oscillating_optimum: g must be positive");
    if (!(b > 0.0)) throw ValidationError("oscillating_optimum: b must be positive");
    if (!(c >= 0.0)) throw ValidationError("oscillating_optimum: c must be non-negative");
    if (!std::isfinite(r)) throw ValidationError("oscillating_optimum: r must be finite");
    auto d = std::make_shared<detail::ModelData>();
    d->kind = ModelKind::oscillating_optimum;
    d->period = 2.0 * std::numbers::pi / b;
    d->params = OptimumParams{r, g, c, b};
    d->analytic = AnalyticInfo{
        [r, g, c](double x) { return r - g * (x * x + 0.5 * c * c); }, 0.0, -2.0 * g};
    d->time_independent = (c == 0.0);
    return EnvironmentModel(std::move(d));
}

EnvironmentModel make_oscillating_pressure(double r, std::function<double(double)> g) {
    if (!g) throw ValidationError("oscillating_pressure: empty g function");
    if (!std::isfinite(r)) throw ValidationError("oscillating_pressure: r must be finite");
    constexpr std::size_t kChecks = 1024;
    for (std::size_t k = 0; k <= kChecks; ++k) {
        const double t = static_cast<double>(k) / kChecks;
        const double gv = g(t);
        if (!(gv > 0.0)) {
            std::ostringstream msg;
            msg << "oscillating_pressure: g(" << t << ") = " << gv
                << " is not positive (selection must point inward)";
            throw ValidationError(msg.str());
        }
    }
    const double g_mean = quad::simpson(g, 0.0, 1.0, 4096);
    auto d = std::make_shared<detail::ModelData>();
    d->kind = ModelKind::oscillating_pressure;
    d->period = 1.0;
    d->params = PressureParams{r, std::move(g), g_mean};
    d->analytic = AnalyticInfo{[r, g_mean](double x) { return r - g_mean * x * x; }, 0.0,
                               -2.0 * g_mean};
    return EnvironmentModel(std::move(d));
}

EnvironmentModel make_cosine_pressure(double r, double g0, double g1) {
    return make_oscillating_pressure(
        r, [g0, g1](double t) { return g0 + g1 * std::cos(2.0 * std::numbers::pi * t); });
}

EnvironmentModel make_tabulated(TabulatedSamples samples) {
    if (!(samples.period > 0.0)) throw ValidationError("tabulated: period must be positive");
    if (samples.nx < 2 || samples.nt < 1) throw ValidationError("tabulated: need nx >= 2, nt >= 1");
    if (!(samples.x_lo < samples.x_hi)) throw ValidationError("tabulated: x_lo must be < x_hi");
    if (samples.values.size() != samples.nx * samples.nt) {
        throw ValidationError("tabulated: expected nx*nt values");
    }
    for (double v : samples.values) {
        if (!std::isfinite(v)) throw ValidationError("tabulated: non-finite sample");
    }
    auto d = std::make_shared<detail::ModelData>();
    d->kind = ModelKind::tabulated;
    d->period = samples.period;
    d->time_independent = (samples.nt == 1);
    d->params = std::move(samples);
    return EnvironmentModel(std::move(d));
}

EnvironmentModel load_tabulated(const std::string& path, Interval x_range) {
    std::ifstream in(path);
    if (!in) throw ValidationError("tabulated: cannot open '" + path + "'");
    TabulatedSamples s;
    s.x_lo = x_range.lo;
    s.x_hi = x_range.hi;
    if (!(in >> s.period >> s.nx >> s.nt)) {
        throw ValidationError("tabulated: '" + path + "': bad header, expected `T nx nt`");
    }
    s.values.resize(s.nx * s.nt);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (!(in >> s.values[i])) {
            std::ostringstream msg;
            msg << "tabulated: '" << path << "': expected " << s.values.size()
                << " values, read " << i;
            throw ValidationError(msg.str());
        }
    }
    return make_tabulated(std::move(s));
}

double mean_growth_quadrature(const EnvironmentModel& model, double x, std::size_t nodes) {
    const double T = model.period();
    return quad::simpson([&](double t) { return model.rate(t, x); }, 0.0, T, nodes) / T;
}

double mean_growth(const EnvironmentModel& model, double x, std::size_t nodes) {
    if (const auto& info = model.analytic()) return info->mean_rate(x);
    if (model.time_independent()) return model.rate(0.0, x);
    return mean_growth_quadrature(model, x, nodes);
}

double locate_optimum(const EnvironmentModel& model, Interval bracket, std::size_t samples) {
    if (!(bracket.lo < bracket.hi) || samples < 3) {
        throw ValidationError("locate_optimum: invalid bracket");
    }
    auto abar = [&](double x) { return mean_growth(model, x); };
    const double h = bracket.width() / static_cast<double>(samples - 1);
    std::vector<double> f(samples);
    double scale = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        f[i] = abar(bracket.lo + h * static_cast<double>(i));
        scale = std::max(scale, std::abs(f[i]));
    }
    const double flat = 1e-13 * (1.0 + scale);

    // Sign of the discrete derivative, with plateaus folded into the
    // preceding run.
    int last_sign = 0;
    std::size_t last_rise = 0;
    std::size_t changes = 0;
    std::size_t peak_lo = 0;
    std::size_t peak_hi = 0;
    for (std::size_t i = 0; i + 1 < samples; ++i) {
        const double d = f[i + 1] - f[i];
        const int s = (d > flat) ? 1 : (d < -flat ? -1 : 0);
        if (s == 0) continue;
        if (s > 0) last_rise = i;
        if (last_sign > 0 && s < 0) {
            ++changes;
            peak_lo = last_rise;
            peak_hi = i + 1;
        }
        last_sign = s;
    }
    if (changes != 1) throw ValidationError("H2 violated on bracket");

    // Golden-section search on the bracketing cells, then a parabolic polish.
    double a = bracket.lo + h * static_cast<double>(peak_lo);
    double b = bracket.lo + h * static_cast<double>(peak_hi);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = abar(x1);
    double f2 = abar(x2);
    while (b - a > 1e-7 * (1.0 + std::abs(a) + std::abs(b))) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = abar(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = abar(x1);
        }
    }
    double x = 0.5 * (a + b);
    const double step = std::max(1e-4, 10.0 * (b - a));
    for (int pass = 0; pass < 2; ++pass) {
        const double fm = abar(x - step);
        const double f0 = abar(x);
        const double fp = abar(x + step);
        const double denom = fp - 2.0 * f0 + fm;
        if (denom < 0.0) {
            const double shift = -0.5 * step * (fp - fm) / denom;
            if (std::abs(shift) <= step) x += shift;
        }
    }
    return x;
}

double rate_bound(const EnvironmentModel& model, Interval domain, std::size_t nx, std::size_t nt) {
    double bound = 0.0;
    const double T = model.period();
    std::vector<double> xs(nx);
    std::vector<double> a(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        xs[i] = domain.lo + domain.width() * static_cast<double>(i) / static_cast<double>(nx - 1);
    }
    for (std::size_t k = 0; k < nt; ++k) {
        model.rate_profile(T * static_cast<double>(k) / static_cast<double>(nt), xs, a);
        for (double v : a) bound = std::max(bound, std::abs(v));
    }
    return bound;
}

double periodicity_residual(const EnvironmentModel& model, Interval domain, std::size_t nx) {
    double worst = 0.0;
    const double T = model.period();
    for (std::size_t i = 0; i < nx; ++i) {
        const double x =
            domain.lo + domain.width() * static_cast<double>(i) / static_cast<double>(nx - 1);
        worst = std::max(worst, std::abs(model.rate(0.0, x) - model.rate(T, x)));
    }
    return worst;
}

HypothesisReport check_hypotheses(const EnvironmentModel& model, Interval domain,
                                  double lambda_hint, std::optional<double> delta) {
    HypothesisReport rep;
    std::ostringstream notes;

    rep.d0 = rate_bound(model, domain);
    rep.periodicity_residual = periodicity_residual(model, domain);
    rep.periodic = rep.periodicity_residual <= 1e-12 * (1.0 + rep.d0);
    if (!rep.periodic) notes << "periodicity residual " << rep.periodicity_residual << "; ";

    try {
        rep.x_m = locate_optimum(model, domain);
        rep.h2_a_m = mean_growth(model, rep.x_m);
        rep.h2_unique_max = rep.h2_a_m > 0.0;
        if (!rep.h2_unique_max) notes << "mean rate at optimum is not positive; ";
    } catch (const ValidationError& e) {
        rep.h2_unique_max = false;
        notes << e.what() << "; ";
    }

    rep.delta = delta.value_or(rep.h2_unique_max ? rep.h2_a_m : 1.0);

    // Confinement: sample max_t a(t, x) + lambda and find the outermost
    // violation of the margin.
    constexpr std::size_t nx = 2001;
    constexpr std::size_t nt = 64;
    const double T = model.period();
    auto worst_at = [&](double x) {
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < nt; ++k) {
            m = std::max(m, model.rate(T * static_cast<double>(k) / nt, x));
        }
        return m + lambda_hint;
    };
    const double h = domain.width() / static_cast<double>(nx - 1);
    double r_viol = -1.0;
    bool edge_violation = false;
    for (std::size_t i = 0; i < nx; ++i) {
        const double x = domain.lo + h * static_cast<double>(i);
        if (worst_at(x) > -rep.delta) {
            r_viol = std::max(r_viol, std::abs(x));
            if (i == 0 || i + 1 == nx) edge_violation = true;
        }
    }
    const double r_edge = std::min(std::abs(domain.lo), std::abs(domain.hi));
    if (r_viol < 0.0) {
        rep.r0 = 0.0;
        rep.h5_confining = true;
    } else if (edge_violation || r_viol + h >= r_edge) {
        rep.r0 = r_viol;
        rep.h5_confining = false;
        notes << "confinement margin fails up to the domain edge; ";
    } else {
        // Bisect between the outermost violation and the next sample.
        auto violates = [&](double r) {
            double m = -std::numeric_limits<double>::infinity();
            if (domain.contains(r)) m = std::max(m, worst_at(r));
            if (domain.contains(-r)) m = std::max(m, worst_at(-r));
            return m > -rep.delta;
        };
        double lo = r_viol;
        double hi = r_viol + h;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (violates(mid) ? lo : hi) = mid;
        }
        rep.r0 = hi;
        rep.h5_confining = true;
    }
    rep.notes = notes.str();
    return rep;
}

}  // namespace fluctsel
