#include <cmath>
#include <vector>

#include "doctest.h"
#include "spectun/errors.hpp"
#include "spectun/neck.hpp"

using namespace spectun;

TEST_CASE("canonical profile constants") {
    const NeckProfile f = NeckProfile::canonical();
    CHECK(f.bump_constant() == doctest::Approx(4.5045672420871652).epsilon(1e-12));
    CHECK(f.f0() == doctest::Approx(0.33445399770997536).epsilon(1e-12));
    CHECK(f.f(0.5) == doctest::Approx(0.53251584915646644).epsilon(1e-12));
    CHECK(f.df(0.5) == doctest::Approx(0.75406543344534227).epsilon(1e-12));
    CHECK(f.ddf(0.0) == doctest::Approx(1.6571376797382116).epsilon(1e-12));
    CHECK(f.margin(0.5) == doctest::Approx(2.0532563385688687).epsilon(1e-12));
}

TEST_CASE("canonical profile meets the cone exactly at the junction") {
    const NeckProfile f = NeckProfile::canonical();
    CHECK(f.f(1.0) == 1.0);
    CHECK(f.df(1.0) == 1.0);
    CHECK(f.ddf(1.0) == 0.0);
    CHECK(f.f(1.7) == 1.7);
    CHECK(f.df(-1.3) == -1.0);
    CHECK(f.f(-0.37) == f.f(0.37));
    CHECK(f.df(-0.37) == -f.df(0.37));
    CHECK(f.ddf(-0.37) == f.ddf(0.37));
    // the gap evaluator keeps relative accuracy where f - |x| underflows naive
    // subtraction
    CHECK(f.cone_gap(0.99) > 0.0);
    CHECK(f.cone_gap(0.99) < 1e-20);
}

TEST_CASE("canonical profile passes every admissibility constraint") {
    const NeckProfile f = NeckProfile::canonical();
    const ConstraintReport rep = f.validate();
    CHECK(rep.ok());
    for (const auto& e : rep.entries) {
        CHECK(e.checked);
        CHECK(e.passed);
    }
}

TEST_CASE("bending margin is nonnegative and bottoms out at the junction") {
    const NeckProfile f = NeckProfile::canonical();
    const auto entry = f.bending_margin();
    CHECK(entry.passed);
    CHECK(entry.worst >= -1e-12);
    // the minimum is the junction equality, reached within rounding just
    // before x = 1
    CHECK(entry.location > 0.99);
    // strictly positive away from the junction, collapsing only at the end
    for (double x : {0.5, 0.6, 0.7, 0.8, 0.9}) CHECK(f.margin(x) > 0.02);
    CHECK(f.margin(0.97) > 0.0);
}

TEST_CASE("junction flatness beats every polynomial rate") {
    const auto rate = NeckProfile::canonical().flatness_rate();
    CHECK(rate.passed);
    CHECK(rate.slope > 10.0);
}

TEST_CASE("a cone smoothed by sqrt(x^2 + c) is rejected") {
    // positive and convex, but it never meets the cone: f(1) != 1
    std::vector<double> x, f;
    for (int i = 0; i <= 400; ++i) {
        const double xi = 2.0 * i / 400.0;
        x.push_back(xi);
        f.push_back(std::sqrt(xi * xi + 0.01));
    }
    const NeckProfile bad = NeckProfile::from_samples(x, f);
    const ConstraintReport rep = bad.validate();
    CHECK_FALSE(rep.ok());
    bool outside_failed = false;
    for (const auto& e : rep.entries)
        if (e.constraint.find("|x| >= 1") != std::string::npos)
            outside_failed = !e.passed;
    CHECK(outside_failed);
}

TEST_CASE("sampled tables skip infinite-order constraints instead of failing") {
    const NeckProfile f = NeckProfile::canonical();
    std::vector<double> x, fx;
    for (int i = 0; i <= 2000; ++i) {
        x.push_back(2.0 * i / 2000.0);
        fx.push_back(f.f(x.back()));
    }
    const NeckProfile sampled = NeckProfile::from_samples(x, fx);
    CHECK(sampled.is_sampled());
    int unchecked = 0;
    for (const auto& e : sampled.validate().entries) {
        if (!e.checked) ++unchecked;
        if (e.checked) CHECK(e.passed);
    }
    CHECK(unchecked >= 1);
    CHECK_THROWS_AS(sampled.dddf(0.5), DomainError);
}
