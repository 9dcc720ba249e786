#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "fluctsel/env_models.hpp"
#include "fluctsel/errors.hpp"

using namespace fluctsel;

namespace {
const double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("oscillating optimum: closed forms") {
    const auto m = make_oscillating_optimum(1, 1, 1, kTwoPi);
    CHECK(m.period() == doctest::Approx(1.0));
    CHECK(m.kind() == ModelKind::oscillating_optimum);
    // a(1/4, 1) = 1 - (1 - sin(pi/2))^2
    CHECK(m.rate(0.25, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mean_growth(m, 0.0) == doctest::Approx(0.5));
    CHECK(mean_growth(m, 0.7) == doctest::Approx(1.0 - (0.49 + 0.5)));
    REQUIRE(m.analytic());
    CHECK(m.analytic()->optimum == 0.0);
    CHECK(m.analytic()->curvature == -2.0);
}

TEST_CASE("oscillating optimum without oscillation is time independent") {
    const auto m = make_oscillating_optimum(1, 1, 0, kTwoPi);
    CHECK(m.time_independent());
    for (double t : {0.0, 0.3, 0.77}) CHECK(m.rate(t, 0.5) == doctest::Approx(0.75));
    CHECK(mean_growth_quadrature(m, 0.5) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("builtin parameters are validated") {
    CHECK_THROWS_AS(make_oscillating_optimum(1, 0, 1, 1), ValidationError);
    CHECK_THROWS_AS(make_oscillating_optimum(1, 1, 1, -1), ValidationError);
    CHECK_THROWS_AS(make_cosine_pressure(1, 1.0, 1.5), ValidationError);
    CHECK_THROWS_AS(make_oscillating_pressure(1, [](double) { return -1.0; }), ValidationError);
}

TEST_CASE("oscillating pressure: mean pressure and evaluation") {
    const auto m = make_cosine_pressure(1, 2.0, 1.8);
    REQUIRE(m.pressure_params());
    // int_0^1 (2 + 1.8 cos 2 pi t) dt = 2 exactly
    CHECK(m.pressure_params()->g_mean == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(m.pressure_params()->g(0.5) == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(mean_growth(m, 0.5) == doctest::Approx(1.0 - 2.0 * 0.25));

    const auto flat = make_oscillating_pressure(1, [](double) { return 2.0; });
    CHECK(flat.rate(0.3, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("quadrature mean matches the closed form on a grid") {
    const auto m1 = make_oscillating_optimum(1, 1.3, 0.8, kTwoPi);
    const auto m2 = make_cosine_pressure(0.7, 2.0, 1.8);
    for (int i = -40; i <= 40; ++i) {
        const double x = 0.1 * i;
        CHECK(std::abs(mean_growth_quadrature(m1, x) - mean_growth(m1, x)) < 1e-10);
        CHECK(std::abs(mean_growth_quadrature(m2, x) - mean_growth(m2, x)) < 1e-10);
    }
}

TEST_CASE("builtin models are exactly periodic") {
    const auto m1 = make_oscillating_optimum(1, 1, 1, 3.0);
    const auto m2 = make_cosine_pressure(1, 2.0, 1.8);
    CHECK(periodicity_residual(m1, {-4, 4}) < 1e-12);
    CHECK(periodicity_residual(m2, {-4, 4}) < 1e-12);
}

TEST_CASE("locate_optimum finds x_m and is shift invariant") {
    const auto m1 = make_oscillating_optimum(1, 1, 1, kTwoPi);
    const auto m2 = make_cosine_pressure(1, 2.0, 1.8);
    CHECK(std::abs(locate_optimum(m1, {-3, 2})) < 1e-8);
    CHECK(std::abs(locate_optimum(m2, {-2, 3})) < 1e-8);

    const auto custom = EnvironmentModel::custom(
        1.0, [](double t, double x) { return 1.0 - (x - 0.3) * (x - 0.3) + 0.2 * std::sin(kTwoPi * t) * x; });
    const double x0 = locate_optimum(custom, {-2, 2});
    CHECK(x0 == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(locate_optimum(custom.shifted(-5.0), {-2, 2}) == doctest::Approx(x0).epsilon(1e-10));
}

TEST_CASE("locate_optimum rejects two equal maxima") {
    const auto twin = EnvironmentModel::custom(
        1.0, [](double, double x) { return -(x * x - 1.0) * (x * x - 1.0); }, std::nullopt, true);
    CHECK_THROWS_WITH_AS(locate_optimum(twin, {-2, 2}), doctest::Contains("H2 violated on bracket"),
                         ValidationError);
}

TEST_CASE("check_hypotheses: confinement radius of the oscillating optimum") {
    const auto m = make_oscillating_optimum(1, 1, 1, kTwoPi);
    const auto rep = check_hypotheses(m, {-5, 5}, 0.0);
    CHECK(rep.periodic);
    CHECK(rep.h2_unique_max);
    CHECK(rep.h2_a_m == doctest::Approx(0.5));
    CHECK(rep.h5_confining);
    CHECK(rep.delta > 0.0);
    // 1 - (R - 1)^2 = -delta with delta = 1/2 gives R0 = 1 + sqrt(3/2).
    CHECK(rep.r0 == doctest::Approx(1.0 + std::sqrt(1.5)).epsilon(1e-9));
    CHECK(rep.d0 == doctest::Approx(35.0));
}

TEST_CASE("check_hypotheses: flat rate fails uniqueness, constant pressure passes") {
    const auto flat = EnvironmentModel::custom(1.0, [](double, double) { return 1.0; }, std::nullopt, true);
    CHECK_FALSE(check_hypotheses(flat, {-5, 5}, 0.0).h2_unique_max);

    const auto p = make_oscillating_pressure(1, [](double) { return 2.0; });
    const auto rep = check_hypotheses(p, {-5, 5}, 0.0);
    CHECK(rep.h2_unique_max);
    CHECK(rep.h5_confining);
    CHECK(rep.periodic);
}

TEST_CASE("tabulated models interpolate bilinearly and wrap time") {
    const auto path = std::filesystem::temp_directory_path() / "fluctsel_tab_test.txt";
    {
        std::ofstream out(path);
        // T = 2, nx = 3 on [-1, 1], nt = 2: a = x + t at t = 0, 1.
        out << "2 3 2\n-1 0 1\n0 1 2\n";
    }
    const auto m = load_tabulated(path.string(), {-1, 1});
    std::filesystem::remove(path);
    CHECK(m.period() == 2.0);
    CHECK(m.rate(0.0, 0.5) == doctest::Approx(0.5));
    CHECK(m.rate(0.5, -0.5) == doctest::Approx(0.0));
    CHECK(m.rate(2.5, 0.0) == doctest::Approx(0.5));  // wraps to t = 0.5
    CHECK(m.rate(1.5, 0.0) == doctest::Approx(0.5));  // between t = 1 and t = 2 = 0
    CHECK(m.rate(0.0, 3.0) == doctest::Approx(1.0));  // clamped in x
    CHECK(periodicity_residual(m, {-1, 1}) < 1e-14);
}

TEST_CASE("tabulated files are validated") {
    const auto path = std::filesystem::temp_directory_path() / "fluctsel_tab_bad.txt";
    {
        std::ofstream out(path);
        out << "1 3 2\n1 2 3\n4 5\n";
    }
    CHECK_THROWS_AS(load_tabulated(path.string(), {-1, 1}), ValidationError);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_tabulated("/nonexistent/file.txt", {-1, 1}), ValidationError);
}

TEST_CASE("frozen models") {
    const auto m = make_oscillating_optimum(1, 2, 1, kTwoPi);
    const auto q = m.frozen_quadratic(0.25);
    REQUIRE(q);
    CHECK(q->center == doctest::Approx(1.0));
    const auto f = m.frozen(0.25);
    CHECK(f.time_independent());
    CHECK(f.rate(0.9, 0.0) == doctest::Approx(m.rate(0.25, 0.0)));
}
