#include "fluctsel/quadrature.hpp"

#include "fluctsel/errors.hpp"

namespace fluctsel::quad {

double trapezoid(std::span<const double> y, double h) {
    if (y.size() < 2) return 0.0;
    double acc = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < y.size(); ++i) acc += y[i];
    return acc * h;
}

double simpson(std::span<const double> y, double h) {
    if (y.size() < 3 || y.size() % 2 == 0) {
        throw ValidationError("simpson: need an odd number of samples >= 3");
    }
    double acc = y.front() + y.back();
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        acc += ((i % 2 == 1) ? 4.0 : 2.0) * y[i];
    }
    return acc * h / 3.0;
}

double periodic_mean(std::span<const double> samples) {
    if (samples.empty()) return 0.0;
    double acc = 0.0;
    for (double v : samples) acc += v;
    return acc / static_cast<double>(samples.size());
}

std::vector<double> cumulative_trapezoid(std::span<const double> y, double h) {
    std::vector<double> out(y.size(), 0.0);
    for (std::size_t i = 1; i < y.size(); ++i) {
        out[i] = out[i - 1] + 0.5 * h * (y[i - 1] + y[i]);
    }
    return out;
}

}  // namespace fluctsel::quad
