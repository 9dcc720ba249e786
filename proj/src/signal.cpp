#include "fluctsel/signal.hpp"

#include <cmath>

#include "fluctsel/errors.hpp"
#include "fluctsel/quadrature.hpp"

namespace fluctsel {

PeriodicSignal PeriodicSignal::from_function(double period, std::function<double(double)> f) {
    if (!(period > 0.0)) throw ValidationError("signal: period must be positive");
    if (!f) throw ValidationError("signal: empty function");
    PeriodicSignal s;
    s.period_ = period;
    s.fn_ = std::move(f);
    return s;
}

PeriodicSignal PeriodicSignal::from_samples(double period, std::vector<double> samples) {
    if (!(period > 0.0)) throw ValidationError("signal: period must be positive");
    if (samples.empty()) throw ValidationError("signal: no samples");
    PeriodicSignal s;
    s.period_ = period;
    s.samples_ = std::move(samples);
    return s;
}

PeriodicSignal PeriodicSignal::constant(double period, double value) {
    return from_samples(period, std::vector<double>{value});
}

double PeriodicSignal::operator()(double t) const {
    if (fn_) return fn_(t);
    const std::size_t n = samples_.size();
    if (n == 1) return samples_[0];
    double u = std::fmod(t, period_);
    if (u < 0.0) u += period_;
    const double pos = u / period_ * static_cast<double>(n);
    auto k = static_cast<std::size_t>(std::floor(pos));
    const double s = pos - static_cast<double>(k);
    k %= n;
    const double p0 = samples_[(k + n - 1) % n];
    const double p1 = samples_[k];
    const double p2 = samples_[(k + 1) % n];
    const double p3 = samples_[(k + 2) % n];
    // Catmull-Rom spline through p1 -> p2.
    return p1 + 0.5 * s *
                    (p2 - p0 +
                     s * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + s * (3.0 * (p1 - p2) + p3 - p0)));
}

double PeriodicSignal::integral(std::size_t nodes) const {
    if (fn_) return quad::simpson(fn_, 0.0, period_, nodes);
    return quad::periodic_mean(samples_) * period_;
}

}  // namespace fluctsel
