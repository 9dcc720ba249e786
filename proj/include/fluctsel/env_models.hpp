#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fluctsel {

/// Closed interval of trait values.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

enum class ModelKind { oscillating_optimum, oscillating_pressure, tabulated, custom };

std::string to_string(ModelKind kind);

/// Closed-form information about the time-averaged growth rate.
struct AnalyticInfo {
    std::function<double(double)> mean_rate;  ///< x -> time average of a(., x)
    double optimum = 0.0;                     ///< unique maximiser x_m of the mean rate
    double curvature = 0.0;                   ///< second derivative of the mean rate at x_m
};

/// a(t,x) = r - g (x - c sin(b t))^2, period 2 pi / b.
struct OptimumParams {
    double r = 1.0;
    double g = 1.0;
    double c = 1.0;
    double b = 1.0;
};

/// a(t,x) = r - g(t) x^2 with g of period 1.
struct PressureParams {
    double r = 1.0;
    std::function<double(double)> g;
    double g_mean = 0.0;
};

/// Growth-rate samples on a uniform (t, x) lattice. Rows are time slices:
/// values[it * nx + ix] = a(it * period / nt, x_lo + ix * (x_hi - x_lo) / (nx - 1)).
struct TabulatedSamples {
    double period = 1.0;
    double x_lo = 0.0;
    double x_hi = 1.0;
    std::size_t nx = 0;
    std::size_t nt = 0;
    std::vector<double> values;
};

/// Frozen quadratic rate r - G (x - center)^2, used for closed-form
/// stationary states.
struct FrozenQuadratic {
    double r = 0.0;
    double g = 0.0;
    double center = 0.0;
};

namespace detail {
struct ModelData;
}

/// A T-periodic growth-rate model a(t, x). Immutable and cheap to copy;
/// copies share the underlying data, so models can be evaluated from
/// concurrent workers.
class EnvironmentModel {
public:
    using RateFn = std::function<double(double t, double x)>;

    /// User-supplied rate. `time_independent` lets steppers cache the
    /// reaction term across periods.
    static EnvironmentModel custom(double period, RateFn rate,
                                   std::optional<AnalyticInfo> info = std::nullopt,
                                   bool time_independent = false);

    double period() const;
    double rate(double t, double x) const;

    /// Evaluates a(t, xs[i]) into out[i].
    void rate_profile(double t, std::span<const double> xs, std::span<double> out) const;

    ModelKind kind() const;
    const std::optional<AnalyticInfo>& analytic() const;
    bool time_independent() const;

    /// Additive offset applied on top of the base rate (0 unless shifted).
    double offset() const;

    const OptimumParams* optimum_params() const;
    const PressureParams* pressure_params() const;
    const TabulatedSamples* tabulated_samples() const;

    /// The model a(t,x) + delta. Builtin kinds keep their kind.
    EnvironmentModel shifted(double delta) const;

    /// The time-independent model x -> a(tau, x), with period 1.
    EnvironmentModel frozen(double tau) const;

    /// For builtin quadratic kinds, a(tau, .) written as r - G (x - center)^2.
    std::optional<FrozenQuadratic> frozen_quadratic(double tau) const;

private:
    explicit EnvironmentModel(std::shared_ptr<const detail::ModelData> data);
    std::shared_ptr<const detail::ModelData> data_;

    friend EnvironmentModel make_oscillating_optimum(double, double, double, double);
    friend EnvironmentModel make_oscillating_pressure(double, std::function<double(double)>);
    friend EnvironmentModel make_tabulated(TabulatedSamples);
};

/// Optimal trait oscillating as c sin(b t) under selection pressure g.
EnvironmentModel make_oscillating_optimum(double r, double g, double c, double b);

/// Selection pressure g(t) oscillating with period 1. g must be positive.
EnvironmentModel make_oscillating_pressure(double r, std::function<double(double)> g);

/// Shorthand for g(t) = g0 + g1 cos(2 pi t).
EnvironmentModel make_cosine_pressure(double r, double g0, double g1);

/// Bilinear interpolation in (t, x), t wrapped modulo the period and x
/// clamped to the sampled range.
EnvironmentModel make_tabulated(TabulatedSamples samples);

/// Reads a tabulated-samples file: header `T nx nt`, then nt rows of nx
/// values. The x lattice spans [x_range.lo, x_range.hi].
EnvironmentModel load_tabulated(const std::string& path, Interval x_range);

/// Default number of Simpson nodes per period for time averages.
inline constexpr std::size_t kMeanNodes = 256;

/// Time average of the rate over one period: closed form when the model
/// carries one, composite Simpson otherwise.
double mean_growth(const EnvironmentModel& model, double x, std::size_t nodes = kMeanNodes);

/// Simpson time average, ignoring any closed form.
double mean_growth_quadrature(const EnvironmentModel& model, double x,
                              std::size_t nodes = kMeanNodes);

/// Locates the unique maximiser of the mean rate inside `bracket`.
/// Throws ValidationError("H2 violated on bracket") unless the discrete
/// derivative of the mean rate changes sign exactly once (+ to -).
double locate_optimum(const EnvironmentModel& model, Interval bracket,
                      std::size_t samples = 401);

/// sup |a(t, x)| over a sampled (t, x) lattice covering one period.
double rate_bound(const EnvironmentModel& model, Interval domain,
                  std::size_t nx = 2001, std::size_t nt = 64);

/// max_x |a(0, x) - a(T, x)| on a sampled lattice.
double periodicity_residual(const EnvironmentModel& model, Interval domain,
                            std::size_t nx = 2001);

struct HypothesisReport {
    bool periodic = false;
    double periodicity_residual = 0.0;
    double d0 = 0.0;  ///< sampled bound on |a|
    bool h2_unique_max = false;
    double x_m = 0.0;
    double h2_a_m = 0.0;  ///< mean rate at x_m
    bool h5_confining = false;
    double delta = 0.0;   ///< confinement margin
    double r0 = 0.0;      ///< radius beyond which a + lambda <= -delta
    std::string notes;
};

/// Sampled verification of periodicity, boundedness, a unique maximum of
/// the mean rate and the confinement margin a + lambda <= -delta for
/// |x| >= R0. `delta` defaults to the peak mean rate when that is
/// positive, and to 1 otherwise.
HypothesisReport check_hypotheses(const EnvironmentModel& model, Interval domain,
                                  double lambda_hint,
                                  std::optional<double> delta = std::nullopt);

}  // namespace fluctsel
