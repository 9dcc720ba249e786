#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace fluctsel::quad {

/// Composite trapezoid rule on uniformly spaced samples.
double trapezoid(std::span<const double> y, double h);

/// Composite Simpson rule on uniformly spaced samples. Requires an odd
/// number of samples (an even number of intervals).
double simpson(std::span<const double> y, double h);

/// Mean of a periodic signal given by uniform samples on [0, T), i.e. the
/// period endpoint is not repeated. This is the trapezoid rule, which is
/// spectrally accurate for smooth periodic data.
double periodic_mean(std::span<const double> samples);

/// Composite Simpson rule for a callable on [a, b] with `intervals`
/// subintervals (rounded up to the next even number).
template <class F>
double simpson(F&& f, double a, double b, std::size_t intervals) {
    if (intervals < 2) intervals = 2;
    if (intervals % 2 != 0) ++intervals;
    const double h = (b - a) / static_cast<double>(intervals);
    double acc = f(a) + f(b);
    for (std::size_t i = 1; i < intervals; ++i) {
        const double w = (i % 2 == 1) ? 4.0 : 2.0;
        acc += w * f(a + h * static_cast<double>(i));
    }
    return acc * h / 3.0;
}

/// Five-point Gauss-Legendre rule on [a, b]; exact for polynomials of
/// degree nine.
template <class F>
double gauss_legendre5(F&& f, double a, double b) {
    static constexpr std::array<double, 5> nodes{
        0.0, -0.5384693101056831, 0.5384693101056831,
        -0.9061798459386640, 0.9061798459386640};
    static constexpr std::array<double, 5> weights{
        0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
        0.2369268850561891, 0.2369268850561891};
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        acc += weights[i] * f(mid + half * nodes[i]);
    }
    return acc * half;
}

/// Cumulative trapezoid integral: out[0] = 0, out[i] = int_0^{x_i} y.
std::vector<double> cumulative_trapezoid(std::span<const double> y, double h);

}  // namespace fluctsel::quad
