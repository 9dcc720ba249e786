#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace fluctsel {

/// A scalar T-periodic signal, either a callable or uniform samples on
/// [0, T) with periodic cubic (Catmull-Rom) interpolation.
class PeriodicSignal {
public:
    PeriodicSignal() = default;

    static PeriodicSignal from_function(double period, std::function<double(double)> f);

    /// samples[k] = value at k * period / samples.size().
    static PeriodicSignal from_samples(double period, std::vector<double> samples);

    /// Constant signal.
    static PeriodicSignal constant(double period, double value);

    double period() const { return period_; }
    double operator()(double t) const;

    /// Integral over one period: trapezoid on the samples for sampled
    /// signals, composite Simpson on `nodes` intervals for callables.
    double integral(std::size_t nodes = 4096) const;

    double mean(std::size_t nodes = 4096) const { return integral(nodes) / period_; }

    bool sampled() const { return !fn_; }
    const std::vector<double>& samples() const { return samples_; }

private:
    double period_ = 1.0;
    std::function<double(double)> fn_;
    std::vector<double> samples_;
};

}  // namespace fluctsel
