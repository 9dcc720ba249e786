#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fluctsel/errors.hpp"
#include "fluctsel/no_mutation.hpp"
#include "fluctsel/quadrature.hpp"

using namespace fluctsel;

namespace {
EnvironmentModel parabola() {
    return EnvironmentModel::custom(1.0, [](double, double x) { return 1.0 - x * x; }, std::nullopt, true);
}
}  // namespace

TEST_CASE("time-independent rate: exponents are exact and rho matches the quadrature oracle") {
    // With n0 = N(0, v): M(t) = int n0 e^{t a} = e^t / sqrt(1 + 2 v t), and
    // rho = M / (1 + int_0^t M).
    const double v = 0.5;
    const auto grid = make_grid(-8, 8, 1599, 0.01, 0.0);
    const auto n0 = gaussian_field(grid, 0.0, v);
    const auto res = simulate_sigma0(grid, parabola(), n0, 5.0, 0.01);
    REQUIRE_FALSE(res.extinct);
    for (std::size_t i = 0; i < grid.nx; i += 97) {
        const double x = grid.x(i);
        CHECK(res.state.log_factors[i] == doctest::Approx(5.0 * (1.0 - x * x)).epsilon(1e-12));
    }
    auto M = [&](double t) { return std::exp(t) / std::sqrt(1.0 + 2.0 * v * t); };
    for (double t : {1.0, 2.5, 5.0}) {
        const double exact = M(t) / (1.0 + quad::simpson(M, 0.0, t, 2000));
        const auto k = static_cast<std::size_t>(std::lround(t / 0.01));
        CHECK(res.rho[k].t == doctest::Approx(t));
        CHECK(res.rho[k].value == doctest::Approx(exact).epsilon(1e-4));
    }
}

TEST_CASE("rho tends to the peak rate and the density concentrates at the optimum") {
    const auto grid = make_grid(-4, 4, 799, 0.01, 0.0);
    const auto res = simulate_sigma0(grid, parabola(), gaussian_field(grid, 0.5, 1.0), 60.0, 0.01);
    CHECK(res.rho.back().value == doctest::Approx(1.0).epsilon(2e-2));
    const auto m = concentration_metrics(res.state, 0.0, 0.5);
    CHECK(std::abs(m.argmax) <= grid.dx());
    CHECK(m.mass_outside < 1e-6);
    CHECK(m.variance < 0.01);
}

TEST_CASE("concentration metrics on a known Gaussian") {
    const auto grid = make_grid(-10, 10, 3999, 0.01, 0.0);
    const auto f = gaussian_field(grid, 0.0, 1.0, 3.0);
    const auto m = concentration_metrics(f, grid, 0.0, 3.0);
    // P(|Z| > 3) for a standard normal.
    CHECK(m.mass_outside == doctest::Approx(std::erfc(3.0 / std::sqrt(2.0))).epsilon(1e-3));
    CHECK(std::abs(m.mean) < 1e-12);
    CHECK(m.variance == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(m.argmax) <= grid.dx());
}

TEST_CASE("exponent state reproduces the density and its mass") {
    const auto grid = make_grid(-3, 3, 299, 0.01, 0.0);
    const auto n0 = gaussian_field(grid, 0.2, 0.3, 1.7);
    const auto s = initial_exponent_state(grid, n0);
    CHECK(exponent_mass(s) == doctest::Approx(total_mass(n0, grid)).epsilon(1e-13));
    const auto back = s.density();
    for (std::size_t i = 0; i < grid.nx; i += 31) CHECK(back.values[i] == doctest::Approx(n0.values[i]));
}

TEST_CASE("concentration metrics reject an empty field") {
    const auto grid = make_grid(-1, 1, 99, 0.01, 0.0);
    DensityField z;
    z.values.assign(grid.nx, 0.0);
    CHECK_THROWS_AS(concentration_metrics(z, grid, 0.0, 0.1), ValidationError);
}
