#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fluctsel/errors.hpp"
#include "fluctsel/quadrature.hpp"
#include "fluctsel/rho_ode.hpp"

using namespace fluctsel;

namespace {
const double kTwoPi = 2.0 * std::numbers::pi;

PeriodicSignal wavy() {
    return PeriodicSignal::from_function(1.0, [](double t) { return 1.0 + 0.8 * std::sin(kTwoPi * t); });
}
}  // namespace

TEST_CASE("constant growth gives the constant orbit") {
    const auto orbit = periodic_rho_closed_form(PeriodicSignal::constant(1.0, 0.7));
    for (const auto& s : orbit.samples) CHECK(std::abs(s.value - 0.7) < 1e-12);
    CHECK(std::abs(orbit.mean - 0.7) < 1e-12);
}

TEST_CASE("the periodic orbit has the mean of q") {
    // d(ln rho)/dt = q - rho integrates to zero over a period.
    const auto q = wavy();
    const auto orbit = periodic_rho_closed_form(q);
    CHECK(orbit.mean == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(orbit.samples.front().value == doctest::Approx(orbit.samples.back().value).epsilon(1e-12));
}

TEST_CASE("closed form satisfies the ODE") {
    const auto q = wavy();
    const auto orbit = periodic_rho_closed_form(q);
    double worst = 0.0;
    const double h = 1e-4;
    for (double t = 0.05; t < 1.0; t += 0.1) {
        const double d = (orbit.at(t + h) - orbit.at(t - h)) / (2.0 * h);
        const double r = orbit.at(t);
        worst = std::max(worst, std::abs(d - r * (q(t) - r)));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("forward integration converges to the closed form from either side") {
    const auto q = wavy();
    const auto exact = periodic_rho_closed_form(q);
    for (double rho0 : {0.05, 5.0}) {
        const auto [orbit, periods] = converge_logistic(q, rho0, 1024, 1e-11);
        CHECK(periods > 1);
        double gap = 0.0;
        for (const auto& s : orbit.samples) gap = std::max(gap, std::abs(s.value - exact.at(s.t)));
        CHECK(gap < 1e-7);
    }
}

TEST_CASE("non-positive mean growth is an extinction regime") {
    const auto q = PeriodicSignal::from_function(1.0, [](double t) { return -1.0 + std::cos(kTwoPi * t); });
    CHECK_THROWS_AS(periodic_rho_closed_form(q), ExtinctionError);
    CHECK_THROWS_AS(converge_logistic(q, 1.0, 256, 1e-10, 2000), ExtinctionError);
}

TEST_CASE("RK4 matches the logistic solution") {
    const double r = 2.0;
    const double rho0 = 0.1;
    const auto traj = integrate_logistic(PeriodicSignal::constant(1.0, r), rho0, 10.0 / r, 1e-2);
    const auto exact = [&](double t) { return r / (1.0 + (r / rho0 - 1.0) * std::exp(-r * t)); };
    CHECK(traj.back().t == doctest::Approx(5.0));
    CHECK(std::abs(traj.back().value - r) < 1e-3 * r);
    double worst = 0.0;
    for (const auto& s : traj) worst = std::max(worst, std::abs(s.value - exact(s.t)));
    CHECK(worst < 1e-7);
}

TEST_CASE("sampled signals integrate with the trapezoid rule") {
    std::vector<double> s;
    for (int k = 0; k < 64; ++k) s.push_back(1.0 + std::cos(kTwoPi * k / 64.0));
    const auto q = PeriodicSignal::from_samples(2.0, s);
    CHECK(q.integral() == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(q(0.0) == doctest::Approx(2.0));
    CHECK(q(2.0) == doctest::Approx(2.0));
    CHECK(q(1.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(integrate_logistic(PeriodicSignal::constant(1.0, 1.0), -1.0, 1.0, 0.1), ValidationError);
    CHECK_THROWS_AS(integrate_logistic(PeriodicSignal::constant(1.0, 1.0), 1.0, 1.0, 0.0), ValidationError);
}
