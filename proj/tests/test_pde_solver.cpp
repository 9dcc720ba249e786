#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fluctsel/errors.hpp"
#include "fluctsel/pde_solver.hpp"
#include "fluctsel/stepper.hpp"

using namespace fluctsel;

namespace {
EnvironmentModel constant_rate(double a) {
    return EnvironmentModel::custom(1.0, [a](double, double) { return a; }, std::nullopt, true);
}

EnvironmentModel parabola() {
    return EnvironmentModel::custom(1.0, [](double, double x) { return 1.0 - x * x; }, std::nullopt, true);
}
}  // namespace

TEST_CASE("total mass: zero field and a hat function") {
    const auto grid = make_grid(-2, 2, 39, 0.01, 0.0);
    DensityField f;
    f.values.assign(grid.nx, 0.0);
    CHECK(total_mass(f, grid) == 0.0);
    for (std::size_t i = 0; i < grid.nx; ++i) f.values[i] = std::max(0.0, 1.0 - std::abs(grid.x(i)));
    CHECK(total_mass(f, grid) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("total mass of a narrow Gaussian") {
    const double eps = 0.05;
    const auto grid = make_grid(-5, 5, 1000, 0.01, eps * eps);
    DensityField f;
    for (std::size_t i = 0; i < grid.nx; ++i) {
        const double x = grid.x(i);
        f.values.push_back(std::exp(-x * x / (2 * eps * eps)) / std::sqrt(2 * std::numbers::pi * eps * eps));
    }
    CHECK(std::abs(total_mass(f, grid) - 1.0) < 1e-6);
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(make_grid(1, -1, 100, 0.01, 0.01), ValidationError);
    CHECK_THROWS_AS(make_grid(-1, 1, 4, 0.01, 0.01), ValidationError);
    CHECK_THROWS_AS(make_grid(-1, 1, 100, 0.0, 0.01), ValidationError);
    CHECK_THROWS_AS(make_grid(-1, 1, 100, 0.01, -1.0), ValidationError);
    const auto ps = period_stepping(make_grid(-1, 1, 100, 0.3, 0.0), 1.0);
    CHECK(ps.steps == 4);
    CHECK(ps.dt == doctest::Approx(0.25));
}

TEST_CASE("without mutation or growth a step only applies competition") {
    const auto grid = make_grid(-3, 3, 199, 0.01, 0.0);
    auto n = gaussian_field(grid, 0.2, 0.3, 2.0);
    const double rho = total_mass(n, grid);
    const auto next = step_imex(n, grid, constant_rate(0.0));
    for (std::size_t i = 0; i < grid.nx; ++i) {
        CHECK(next.values[i] == doctest::Approx(n.values[i] * (1.0 - 0.01 * rho)).epsilon(1e-14));
    }
    CHECK(next.time == doctest::Approx(0.01));
}

TEST_CASE("diffusion conserves interior mass and preserves symmetry") {
    const auto grid = make_grid(-4, 4, 399, 0.01, 0.05);
    const auto n = gaussian_field(grid, 0.0, 0.1, 1.0);
    const double rho = total_mass(n, grid);
    // a equal to rho cancels the reaction term exactly.
    auto cur = n;
    for (int k = 0; k < 20; ++k) cur = step_imex(cur, grid, constant_rate(rho));
    CHECK(total_mass(cur, grid) == doctest::Approx(rho).epsilon(1e-10));
    double asym = 0.0;
    for (std::size_t i = 0; i < grid.nx; ++i) asym = std::max(asym, std::abs(cur.values[i] - cur.values[grid.nx - 1 - i]));
    CHECK(asym < 1e-13);
    // Diffusion spreads the profile.
    CHECK(cur.values[grid.nx / 2] < n.values[grid.nx / 2]);
}

TEST_CASE("explicit reaction stability is enforced") {
    const auto grid = make_grid(-1, 1, 99, 0.5, 0.0);
    const auto n = gaussian_field(grid, 0.0, 0.1, 1.0);
    CHECK_THROWS_AS(step_imex(n, grid, constant_rate(5.0)), ValidationError);
}

TEST_CASE("uniform death drives the population extinct") {
    const auto grid = make_grid(-4, 4, 199, 0.01, 0.0025);
    const auto res = simulate(grid, constant_rate(-1.0), gaussian_field(grid, 0, 0.1), 30.0);
    CHECK(res.extinct);
    // Mass decays at least like e^{-t}, reaching the threshold near ln(1e12).
    CHECK(res.extinction_time <= std::log(1e12) + 0.5);
}

TEST_CASE("a fixed parabolic landscape reaches the ground-state equilibrium") {
    // -sigma u'' + x^2 u = sqrt(sigma) u, so rho* = 1 - sqrt(sigma).
    for (auto scheme : {TimeScheme::backward_euler, TimeScheme::crank_nicolson}) {
        const auto grid = make_grid(-2, 2, 399, 0.01, 0.0025, scheme);
        const auto orbit = find_periodic_orbit(grid, parabola(), gaussian_field(grid, 0.3, 0.5));
        CHECK(orbit.period_gap < 1e-8);
        CHECK(orbit.rho_mean() == doctest::Approx(0.95).epsilon(1e-3));
        CHECK(orbit.contraction_rate < 1.0);
    }
}

TEST_CASE("simulate records a rho sample per step and reports period gaps") {
    const auto grid = make_grid(-2, 2, 199, 0.05, 0.0025);
    std::size_t calls = 0;
    const auto res = simulate(grid, parabola(), gaussian_field(grid, 0, 0.2), 3.0,
                              [&](double, std::span<const double>) { ++calls; });
    CHECK(res.rho.size() == res.diagnostics.steps + 1);
    CHECK(calls == res.diagnostics.steps);
    CHECK(res.diagnostics.period_gaps.size() == 3);
    CHECK_FALSE(res.extinct);
}

TEST_CASE("a strongly negative shift has no persistent orbit") {
    const auto grid = make_grid(-3, 3, 199, 0.02, 0.0025);
    const auto model = make_oscillating_optimum(1, 1, 1, 2 * std::numbers::pi).shifted(-10.0);
    CHECK_THROWS_AS(find_periodic_orbit(grid, model, default_initial_guess(grid, model)), ExtinctionError);
}

TEST_CASE("population and comparison bounds") {
    const auto b = population_bounds(0.5, 2.0, -0.3, 1.0);
    CHECK(b.rho_M == 2.0);
    CHECK(b.rho_m == doctest::Approx(std::exp(-2.0) * (std::exp(0.3) - 1.0)));
    CHECK_THROWS_AS(population_bounds(0.5, 2.0, 0.1, 1.0), ValidationError);

    const auto grid = make_grid(-3, 3, 299, 0.01, 0.04);
    DensityField n0;
    for (std::size_t i = 0; i < grid.nx; ++i) n0.values.push_back(std::exp(2.0 - std::abs(grid.x(i))));
    const auto cb = comparison_bound(n0, grid, 1.5);
    CHECK(cb.c1 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(cb.c3 == doctest::Approx(0.04 + 1.5));
    CHECK(cb.log_bound(1.0, 0.5) == doctest::Approx(2.0 - 0.5 + 1.54));
}
