#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "fluctsel/signal.hpp"

namespace fluctsel {

/// Sample of a scalar trajectory.
struct TimeValue {
    double t = 0.0;
    double value = 0.0;
};

/// One period of the positive periodic solution of d(rho)/dt = rho (q - rho).
/// Samples are uniform on [0, T], endpoint included. `slopes` holds the
/// right-hand side at each sample, used for Hermite interpolation.
struct RhoOrbit {
    double period = 1.0;
    std::vector<TimeValue> samples;
    std::vector<double> slopes;
    double mean = 0.0;

    /// Cubic Hermite interpolation, t wrapped modulo the period.
    double at(double t) const;
};

struct ClosedFormOptions {
    std::size_t samples = 512;         ///< output intervals per period
    std::size_t fine_nodes = 1 << 16;  ///< antiderivative grid per period
};

/// Positive periodic solution of the logistic equation with periodic
/// growth signal q, from its explicit representation
///   rho(t) = (1 - e^{-I}) / (e^{-I} int_t^{t+T} exp(int_t^s q) ds),
/// with I = int_0^T q. Throws ExtinctionError when I <= 0.
RhoOrbit periodic_rho_closed_form(const PeriodicSignal& q, ClosedFormOptions opts = {});

/// Classical RK4 integration of d(rho)/dt = rho (q(t) - rho) on [0, t_end].
/// A step that would lose positivity is retried with half the step size.
std::vector<TimeValue> integrate_logistic(const PeriodicSignal& q, double rho0, double t_end,
                                          double dt);

/// Integrates whole periods until successive period samples differ by less
/// than `tol` relative to the sup of the latest period; returns the last period as an orbit together
/// with the number of periods used.
std::pair<RhoOrbit, std::size_t> converge_logistic(const PeriodicSignal& q, double rho0,
                                                   std::size_t steps_per_period = 512,
                                                   double tol = 1e-10,
                                                   std::size_t max_periods = 10000);

/// Time average of the orbit.
double orbit_mean(const RhoOrbit& orbit);

}  // namespace fluctsel
