#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fluctsel/asymptotics.hpp"
#include "fluctsel/errors.hpp"

using namespace fluctsel;

namespace {
const double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("Hopf-Cole transform of a Gaussian of variance eps") {
    const double eps = 0.05;
    const auto grid = make_grid(-1, 1, 199, 0.01, eps * eps);
    const auto f = gaussian_field(grid, 0.0, eps);
    const auto u = hopf_cole(f, eps);
    for (std::size_t i = 0; i < grid.nx; i += 13) {
        const double x = grid.x(i);
        CHECK(u[i] == doctest::Approx(-0.5 * x * x).epsilon(1e-12));
    }
    CHECK_THROWS_AS(hopf_cole(f, 0.0), ValidationError);
}

TEST_CASE("limit phase of quadratic landscapes") {
    const auto m1 = make_oscillating_optimum(1, 2, 1, kTwoPi);
    const auto m2 = make_cosine_pressure(1, 2.0, 1.8);
    const std::vector<double> xs{-1.5, -0.4, 0.0, 0.3, 1.2};
    const auto p1 = limit_profile(m1, mean_growth(m1, 0.0), xs);
    const auto p2 = limit_profile(m2, 1.0, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double exact = -std::sqrt(2.0) / 2.0 * xs[i] * xs[i];
        CHECK(p1.u[i] == doctest::Approx(exact).epsilon(1e-10));
        CHECK(p2.u[i] == doctest::Approx(exact).epsilon(1e-10));
    }
    CHECK(p1.taylor.A == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_WITH_AS(limit_phase(m2, 0.5, 0.0, 1.0), doctest::Contains("H2/limit inconsistency"),
                         ValidationError);
}

TEST_CASE("Taylor coefficients from finite differences") {
    // rho_bar - abar = x^2 + x^3, so u = -(x^2/2 + x^3/6 - x^4/32) + O(x^5).
    const auto model = EnvironmentModel::custom(
        1.0, [](double, double x) { return 1.0 - x * x - x * x * x; }, std::nullopt, true);
    const auto tc = taylor_coefficients_fd(model, 1.0, 0.0, 0.02);
    CHECK(tc.A == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(tc.B == doctest::Approx(-1.0 / 6.0).epsilon(1e-3));
    CHECK(tc.C == doctest::Approx(1.0 / 32.0).epsilon(1e-2));
}

TEST_CASE("corrector of the oscillating optimum") {
    const double r = 1, g = 1, c = 1, b = kTwoPi;
    const auto model = make_oscillating_optimum(r, g, c, b);
    const auto q = PeriodicSignal::from_function(1.0, [&](double t) { return model.rate(t, 0.0); });
    const auto cor = corrector(model, periodic_rho_closed_form(q));
    CHECK(cor.kappa_bar == doctest::Approx(-std::sqrt(g)));
    CHECK(cor.x_m == 0.0);
    double worst = 0.0;
    for (std::size_t k = 0; k < cor.t.size(); ++k) {
        worst = std::max(worst, std::abs(cor.D[k] + 2.0 * c * g / b * std::cos(b * cor.t[k])));
    }
    CHECK(worst < 1e-4);
    CHECK(std::abs(cor.mean_dx_v(0.0)) < 1e-4);
}

TEST_CASE("corrector of the oscillating pressure") {
    const auto model = make_cosine_pressure(1, 2.0, 1.8);
    const auto q = PeriodicSignal::constant(1.0, 1.0);
    const auto cor = corrector(model, periodic_rho_closed_form(q));
    // v_p = -x^2 int_0^t (g - gbar), so D = 0 and E = -int_0^t (g - gbar) + mean.
    double worst_d = 0.0;
    double worst_e = 0.0;
    for (std::size_t k = 0; k < cor.t.size(); ++k) {
        worst_d = std::max(worst_d, std::abs(cor.D[k]));
        const double e = -1.8 * std::sin(kTwoPi * cor.t[k]) / kTwoPi;
        worst_e = std::max(worst_e, std::abs(cor.E[k] - e));
    }
    CHECK(worst_d < 1e-8);
    CHECK(worst_e < 1e-4);
}

TEST_CASE("moment expansion") {
    const TaylorCoefficients tc{2.0, 0.3, -0.1};
    const double eps = 0.05;
    CHECK(gaussian_moment_expansion(1, tc, 0.4, 0.0, eps, 1.0) ==
          doctest::Approx(1.0 + eps * (3 * 0.3 / 4.0 + 0.4 / 2.0)));
    CHECK(gaussian_moment_expansion(2, tc, 0.4, 0.0, eps) == doctest::Approx(eps / 2.0));
    CHECK(gaussian_moment_expansion(3, tc, 0.4, 0.0, eps) == doctest::Approx(6 * 0.3 * eps * eps / 8.0));
    CHECK(gaussian_moment_expansion(4, tc, 0.4, 0.0, eps) == doctest::Approx(3 * eps * eps / 4.0));
    CHECK(gaussian_moment_expansion(0, {1.0, 0.0, 0.0}, 0.0, 0.0, eps) == doctest::Approx(1.0));
    CHECK_THROWS_AS(gaussian_moment_expansion(5, tc, 0, 0, eps), ValidationError);
    CHECK_THROWS_AS(gaussian_moment_expansion(1, {0.0, 0, 0}, 0, 0, eps), ValidationError);
}

TEST_CASE("predicted moments of the builtin examples") {
    const double eps = 0.05;
    const auto m1 = predict_moments(make_oscillating_optimum(1, 1, 1, kTwoPi), eps);
    CHECK(m1.source == MomentSource::asymptotic);
    CHECK(m1.rho_mean == doctest::Approx(0.5 - eps));
    CHECK(m1.sigma2_mean == doctest::Approx(eps));
    const auto fit = fit_sinusoid(m1.t, m1.mu, kTwoPi);
    CHECK(fit.amplitude == doctest::Approx(2.0 * eps / kTwoPi).epsilon(1e-6));

    const auto m2 = predict_moments(make_cosine_pressure(1, 2.0, 1.8), eps);
    CHECK(m2.rho_mean == doctest::Approx(1.0 - eps * std::sqrt(2.0)));
    for (double mu : m2.mu) CHECK(std::abs(mu) < 1e-12);
}

TEST_CASE("sinusoid fit recovers offset, amplitude and lag") {
    std::vector<double> t, y;
    for (int k = 0; k < 100; ++k) {
        t.push_back(k * 0.01);
        y.push_back(1.0 + 2.0 * std::sin(kTwoPi * t.back() - 0.3));
    }
    const auto f = fit_sinusoid(t, y, kTwoPi);
    CHECK(f.offset == doctest::Approx(1.0));
    CHECK(f.amplitude == doctest::Approx(2.0));
    CHECK(f.lag == doctest::Approx(0.3));
    CHECK(f.rms_residual < 1e-12);
}

TEST_CASE("stationary state of a frozen quadratic environment") {
    const double eps = 0.05;
    const auto grid = make_grid(-3, 3, 599, 1.0 / 64, eps * eps, TimeScheme::crank_nicolson);
    const auto model = make_cosine_pressure(1, 2.0, 1.8);
    FloquetOptions opt;
    opt.min_steps_per_period = 64;
    const auto s = stationary_constant_env(model, 0.5, eps, grid, opt);
    REQUIRE(s.rho_analytic);
    CHECK(*s.rho_analytic == doctest::Approx(1.0 - eps * std::sqrt(0.2)));
    CHECK(s.rho_numeric == doctest::Approx(*s.rho_analytic).epsilon(1e-4));
    CHECK(s.sup_relative_gap < 1e-2);
    // Gaussian of variance eps / sqrt(G).
    CHECK(s.variance == doctest::Approx(eps / std::sqrt(0.2)).epsilon(1e-3));
}
