#include <cmath>

#include "doctest.h"
#include "spectun/errors.hpp"
#include "spectun/geometry.hpp"
#include "spectun/warp.hpp"

using namespace spectun;

namespace {
constexpr double kPi = 3.14159265358979323846;

double rel_gap(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}
}  // namespace

TEST_CASE("space forms have constant Ricci curvature to rounding") {
    struct Case {
        WarpProfile w;
        double ric_unit;  // Ric = ric_unit * (n-1) in every direction
    };
    const Case cases[] = {
        {WarpProfile::euclidean(3.0), 0.0},
        {WarpProfile::sphere(1.0), 1.0},
        {WarpProfile::hyperbolic_cap(3.0, -1.0), -1.0},
    };
    for (const auto& [w, unit] : cases) {
        for (int n : {3, 4, 5}) {
            const double want = unit * (n - 1);
            // middle 90%: within ~1e-3 of a pole the direct spherical-term
            // cancellation costs more than the 1e-12 budget by itself
            const double lo = w.r_min() + 0.05 * w.length();
            const double hi = w.r_max() - 0.05 * w.length();
            for (int i = 0; i <= 200; ++i) {
                const double r = lo + (hi - lo) * i / 200.0;
                const CurvatureSample c = curvature(w, n, r);
                CHECK(rel_gap(c.ric_rr, want) < 1e-12);
                CHECK(rel_gap(c.ric_ee, want) < 1e-12);
                CHECK(c.ric_mixed == 0.0);
                CHECK(rel_gap(c.ric_min, want) < 1e-12);
            }
        }
    }
}

TEST_CASE("curvature stays finite and correct through the pole cap") {
    const WarpProfile s = WarpProfile::sphere(1.0);
    for (double r : {0.0, 1e-9, 1e-5, 1e-3, 2e-3}) {
        const CurvatureSample c = curvature(s, 3, r);
        CHECK(c.ric_rr == doctest::Approx(2.0).epsilon(1e-8));
        CHECK(c.ric_ee == doctest::Approx(2.0).epsilon(1e-8));
    }
    const WarpProfile e = WarpProfile::euclidean(1.0);
    const CurvatureSample flat = curvature(e, 3, 1e-7);
    CHECK(std::abs(flat.ric_rr) < 1e-8);
    CHECK(std::abs(flat.ric_ee) < 1e-8);
}

TEST_CASE("ricci components obey the sectional decomposition") {
    const WarpProfile w = WarpProfile::warped_circle(2 * kPi, 0.3);
    for (int i = 0; i < 40; ++i) {
        const double r = 2 * kPi * i / 40.0;
        for (int n : {3, 5}) {
            const CurvatureSample c = curvature(w, n, r);
            CHECK(c.ric_rr == doctest::Approx((n - 1) * c.k_rad).epsilon(1e-13));
            CHECK(c.ric_ee ==
                  doctest::Approx(c.k_rad + (n - 2) * c.k_sph).epsilon(1e-13));
            CHECK(c.ric_min == doctest::Approx(std::min(c.ric_rr, c.ric_ee)).epsilon(1e-13));
            CHECK(ricci_radial(w, n, r) == c.ric_rr);
            CHECK(ricci_tangential(w, n, r) == c.ric_ee);
        }
    }
}

TEST_CASE("a neck-shaped warp has negative radial Ricci at its waist") {
    // phi'' > 0 at the minimum of the warp makes the radial direction the
    // smallest Ricci eigenvalue there.
    const WarpProfile w = WarpProfile::warped_circle(2 * kPi, 0.3);
    const CurvatureSample waist = curvature(w, 3, kPi);  // cos term at its minimum
    CHECK(waist.ric_rr < 0.0);
    CHECK(waist.ric_min == doctest::Approx(waist.ric_rr));
    CHECK(waist.ric_min < waist.ric_ee);
}

TEST_CASE("radial laplacian matches closed forms and its pole limit") {
    const WarpProfile s = WarpProfile::sphere(1.0);
    const RadialFunction u{std::cos(1.0), -std::sin(1.0), -std::cos(1.0)};
    // u = cos r on the unit 3-sphere: Lap u = -3 cos r
    CHECK(laplacian_radial(s, 3, 1.0, u) == doctest::Approx(-3 * std::cos(1.0)).epsilon(1e-13));

    const RadialFunction at_pole{1.0, 0.0, -1.0};
    CHECK(laplacian_radial(s, 3, 0.0, at_pole, true) == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK_THROWS_AS(laplacian_radial(s, 3, 0.0, at_pole, false), SingularityError);
}

TEST_CASE("fiber factor of a smooth cap decays at the stated rates") {
    const WarpProfile s = WarpProfile::sphere(1.0);
    const FiberFactor f = fiber_factor(s, 0.0, 0.5);
    const double want = std::pow(std::sin(0.5) / 0.5, 2);
    CHECK(f.a == doctest::Approx(want).epsilon(1e-12));

    const auto rates = fiber_rates(s, 0.0, 0.25, 8);
    for (const auto& r : rates) CHECK(r.passed);
}

TEST_CASE("unit sphere areas") {
    CHECK(sphere_area(3) == doctest::Approx(4 * kPi).epsilon(1e-15));
    CHECK(sphere_area(4) == doctest::Approx(2 * kPi * kPi).epsilon(1e-15));
}
