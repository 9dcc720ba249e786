#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fluctsel/quadrature.hpp"

using namespace fluctsel;

TEST_CASE("trapezoid is exact for linear data") {
    std::vector<double> y;
    for (int i = 0; i <= 10; ++i) y.push_back(3.0 + 2.0 * 0.1 * i);
    // int_0^1 (3 + 2x) dx = 4
    CHECK(quad::trapezoid(y, 0.1) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("simpson is exact for cubics and rejects even sample counts") {
    std::vector<double> y;
    const double h = 0.25;
    for (int i = 0; i <= 8; ++i) {
        const double x = h * i;
        y.push_back(x * x * x - x);
    }
    // int_0^2 (x^3 - x) dx = 4 - 2
    CHECK(quad::simpson(y, h) == doctest::Approx(2.0).epsilon(1e-14));
    y.pop_back();
    CHECK_THROWS(quad::simpson(y, h));
}

TEST_CASE("callable simpson and Gauss-Legendre") {
    auto f = [](double x) { return std::exp(x); };
    CHECK(quad::simpson(f, 0.0, 1.0, 64) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-9));
    auto p9 = [](double x) { return std::pow(x, 9) + x * x; };
    // int_0^2 x^9 + x^2 = 102.4 + 8/3
    CHECK(quad::gauss_legendre5(p9, 0.0, 2.0) ==
          doctest::Approx(102.4 + 8.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("periodic mean of sin^2 is one half") {
    std::vector<double> s;
    for (int k = 0; k < 32; ++k) {
        const double v = std::sin(2.0 * std::numbers::pi * k / 32.0);
        s.push_back(v * v);
    }
    CHECK(quad::periodic_mean(s) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("cumulative trapezoid ends at the trapezoid integral") {
    std::vector<double> y{1.0, 2.0, 4.0, 3.0};
    const auto c = quad::cumulative_trapezoid(y, 0.5);
    REQUIRE(c.size() == 4);
    CHECK(c[0] == 0.0);
    CHECK(c[1] == doctest::Approx(0.75));
    CHECK(c[3] == doctest::Approx(quad::trapezoid(y, 0.5)));
}
