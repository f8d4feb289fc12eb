#include <cmath>
#include <vector>

#include "doctest.h"
#include "spectun/errors.hpp"
#include "spectun/interp.hpp"
#include "spectun/ode.hpp"
#include "spectun/quadrature.hpp"
#include "spectun/rates.hpp"

using namespace spectun;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("adaptive quadrature reaches the requested tolerance") {
    const double s = integrate([](double x) { return std::sin(x); }, 0.0, kPi, 1e-13);
    CHECK(s == doctest::Approx(2.0).epsilon(1e-13));

    // A sharp interior peak the fixed panel would miss.
    const double peaked = integrate(
        [](double x) { return 1.0 / (1e-4 + (x - 0.7) * (x - 0.7)); }, 0.0, 1.0, 1e-11);
    const double exact = (std::atan(0.3 / 1e-2) + std::atan(0.7 / 1e-2)) / 1e-2;
    CHECK(peaked == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("gauss8 integrates polynomials through degree 15 exactly") {
    const double got = gauss8([](double x) { return std::pow(x, 15); }, 0.0, 1.0);
    CHECK(got == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
}

TEST_CASE("monotone cubic interpolation hits knots and preserves monotonicity") {
    std::vector<double> x{0.0, 0.5, 1.0, 2.0, 3.0};
    std::vector<double> y{0.0, 0.1, 0.9, 0.95, 2.0};
    Pchip p(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(p(x[i]) == doctest::Approx(y[i]).epsilon(1e-15));
    double prev = p(0.0);
    for (int i = 1; i <= 300; ++i) {
        const double v = p(3.0 * i / 300.0);
        CHECK(v >= prev - 1e-14);
        prev = v;
    }
    // deriv is the analytic derivative of the evaluated piece
    const double h = 1e-6;
    const double fd = (p(1.7 + h) - p(1.7 - h)) / (2 * h);
    CHECK(p.deriv(1.7) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("second-order integrator tracks the harmonic oscillator") {
    const auto sol = integrate_second_order(
        [](double, double u, double) { return -u; }, 0.0, 0.0, 1.0, kPi);
    CHECK(sol.u(kPi / 2) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.u(kPi) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(sol.du(kPi) == doctest::Approx(-1.0).epsilon(1e-9));

    // The dense output must satisfy the ODE between nodes, not only at them.
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double t = kPi * i / 1000.0;
        worst = std::max(worst, std::abs(sol.ddu(t) + sol.u(t)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("integrator runs backward and respects fixed steps") {
    const auto back = integrate_second_order(
        [](double, double u, double) { return -u; }, kPi / 2, 1.0, 0.0, 0.0);
    CHECK(back.u(0.0) == doctest::Approx(0.0).epsilon(1e-9));

    OdeOptions opts;
    opts.fixed_step = true;
    opts.fixed_h = 1e-3;
    const auto fixed = integrate_second_order(
        [](double, double u, double) { return -u; }, 0.0, 0.0, 1.0, 1.0, opts);
    CHECK(fixed.u(1.0) == doctest::Approx(std::sin(1.0)).epsilon(1e-10));
}

TEST_CASE("rate fitting recovers power laws and flags insufficient data") {
    std::vector<RateSample> quadratic, flat, zero;
    for (int k = 0; k <= 7; ++k) {
        const double r = std::ldexp(1.0, -k);
        quadratic.push_back({r, r * r});
        flat.push_back({r, 2.0 + 0.01 * k});
        zero.push_back({r, 0.0});
    }
    const auto good = rate_check(quadratic, 0, "q");
    CHECK(good.passed);
    CHECK(good.slope == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_FALSE(rate_check(flat, 0, "flat").passed);

    const auto exact = rate_check(zero, 2, "zero");
    CHECK(exact.passed);
    CHECK(std::isinf(exact.slope));

    std::vector<RateSample> few(quadratic.begin(), quadratic.begin() + 4);
    CHECK_THROWS_AS(rate_check(few, 0), InsufficientData);
}
