#include <cmath>

#include "doctest.h"
#include "spectun/errors.hpp"
#include "spectun/green.hpp"
#include "spectun/model.hpp"

using namespace spectun;

namespace {
constexpr double kPi = 3.14159265358979323846;

ModelManifold sphere_one_mark() {
    return ModelManifold(Params(3, 3.0, 2.0, 0.2), WarpProfile::sphere(1.0), {0.0},
                         "round sphere");
}
}  // namespace

TEST_CASE("euclidean solution with zero shift is exactly harmonic") {
    // lambda = epsilon/2 makes the shifted equation -gamma Lap u = 0, whose
    // normalized solution is u = b / s with w identically 1.
    const ModelManifold m(Params(3, 3.0, 0.2, 0.4), WarpProfile::euclidean(3.0), {0.0});
    const GreenSolution sol = green_solve(m);
    const double b = 1.0 / (3.0 * 4.0 * kPi);
    CHECK(sol.b() == doctest::Approx(b).epsilon(1e-14));
    for (double s : {1e-4, 1e-2, 0.5, 1.0, 2.0, 2.95}) {
        CHECK(std::abs(sol.w(0, s) - 1.0) < 1e-9);
        CHECK(sol.u(s) == doctest::Approx(b / s).epsilon(1e-9));
        CHECK(std::abs(sol.dw(0, s)) < 1e-7);
    }
    CHECK(std::abs(sol.meta().mass[0] - 1.0) < 1e-6);
}

TEST_CASE("hyperbolic cap solution matches its closed form") {
    // With constant potential the substitution y = u sinh(s) linearizes the
    // radial equation: u = b exp(-kappa s)/sinh(s), kappa^2 = 1 + (V - mu)/gamma.
    const Params p(3, 3.0, 1.0, 0.4);
    const ModelManifold m(p, WarpProfile::hyperbolic_cap(3.0, -1.0), {0.0});
    const GreenSolution sol = green_solve(m);
    const double q = (-2.0 - (p.lambda - p.epsilon / 2)) / p.gamma;
    const double kappa = std::sqrt(1.0 + q);
    const double b = sol.b();
    for (double s : {0.3, 0.9, 1.7, 2.6}) {
        const double want = b * std::exp(-kappa * s) / std::sinh(s);
        CHECK(sol.u(s) == doctest::Approx(want).epsilon(1e-8));
    }
    CHECK(sol.meta().residual < 1e-8);
}

TEST_CASE("round sphere solution: frozen values, mass, and decay rates") {
    const GreenSolution sol = green_solve(sphere_one_mark());
    CHECK(sol.u(kPi / 2) == doctest::Approx(0.50240678798154799).epsilon(5e-9));
    CHECK(sol.u(kPi) == doctest::Approx(0.49413458474859732).epsilon(5e-9));
    CHECK(std::abs(sol.meta().mass[0] - 1.0) < 1e-6);
    CHECK(sol.meta().residual < 1e-8);
    CHECK(sol.meta().bound_constant >= 1.0);
    CHECK(sol.meta().eigensolve_ran);
    CHECK(sol.meta().lambda1 == doctest::Approx(2.0).epsilon(1e-6));

    const auto rates = green_asymptotics_check(sol);
    REQUIRE(rates.size() == 3);
    for (const auto& r : rates) CHECK(r.passed);
}

TEST_CASE("two marked poles on one sphere give the symmetric double source") {
    const ModelManifold m(Params(3, 3.0, 2.0, 0.2), WarpProfile::sphere(1.0),
                          {0.0, kPi}, "handle ambient");
    const GreenSolution sol = green_solve(m);
    CHECK(sol.num_basepoints() == 2);
    CHECK(sol.u(kPi / 2) == doctest::Approx(1.004813575963096).epsilon(5e-9));
    CHECK(std::abs(sol.meta().mass[0] - 1.0) < 1e-6);
    CHECK(std::abs(sol.meta().mass[1] - 1.0) < 1e-6);
    // symmetry of the configuration
    CHECK(sol.u(0.4) == doctest::Approx(sol.u(kPi - 0.4)).epsilon(1e-9));
}

TEST_CASE("library solver agrees with the constant-curvature model solver") {
    // Same equation two ways: the sphere solve rearranges to
    // u'' + 2 cot(s) u' = F u with F = (V - mu)/gamma = 1/30, delta mass 1/gamma.
    const GreenSolution sol = green_solve(sphere_one_mark());
    const ModelGreenResult ref = model_green(1.0, 1.0 / 30.0, 1.0 / 3.0, 3.0, 3);
    for (double s : {0.2, 0.7, 1.5, 2.4, 2.9}) {
        CHECK(sol.u(s) == doctest::Approx(ref.eval(s)).epsilon(1e-8));
    }
}

TEST_CASE("model solver closed forms and failure modes") {
    // K = 0, F = 0: exactly b / r
    const ModelGreenResult flat = model_green(0.0, 0.0, 1.0, 2.0, 3);
    CHECK(flat.b == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-13));
    CHECK(flat.eval(0.7) == doctest::Approx(flat.b / 0.7).epsilon(1e-10));
    CHECK(flat.asymptote.passed);

    // K = 0, F = 1: Yukawa screening b e^{-r} / r
    const ModelGreenResult yukawa = model_green(0.0, 1.0, 1.0, 2.0, 3);
    CHECK(yukawa.eval(1.0) ==
          doctest::Approx(std::exp(-1.0) / (4.0 * kPi)).epsilon(1e-9));

    // F < 0 is oscillatory: positivity fails once the radius passes the node
    CHECK_THROWS_AS(model_green(0.0, -1.0, 1.0, 10.0, 3), RadiusTooLarge);
    const ModelGreenResult shortball = model_green(0.0, -1.0, 1.0, 2.0, 3);
    CHECK(shortball.eval(1.0) > 0.0);
    CHECK(shortball.residual < 1e-8);
}

TEST_CASE("a shift above the spectral floor admits no positive solution") {
    const ModelManifold m(Params(3, 3.0, 2.5, 0.2), WarpProfile::sphere(1.0), {0.0});
    CHECK_THROWS_AS(green_solve(m), NoPositiveSolution);
}

TEST_CASE("marks must be poles and at most two") {
    const Params p(3, 3.0, 2.0, 0.2);
    CHECK_THROWS_AS(ModelManifold(p, WarpProfile::sphere(1.0), {1.0}), DomainError);
    CHECK_THROWS_AS(ModelManifold(p, WarpProfile::sphere(1.0), {0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(
        ModelManifold(p, WarpProfile::cylinder(2.0), {0.0}), DomainError);
}
