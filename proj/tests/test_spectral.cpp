#include <cmath>
#include <random>

#include "doctest.h"
#include "spectun/errors.hpp"
#include "spectun/model.hpp"
#include "spectun/spectral.hpp"

using namespace spectun;

namespace {
constexpr double kPi = 3.14159265358979323846;
const Params kP(3, 3.0, 2.0, 0.2);
}  // namespace

TEST_CASE("round sphere: ground state is constant with eigenvalue min Ric") {
    const ModelManifold m(kP, WarpProfile::sphere(1.0));
    const SpectralResult sp = lambda1_radial(m, 3.0, 4096);
    CHECK(sp.lambda1 == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(sp.fiber_mode_gap == doctest::Approx(9.0).epsilon(1e-6));
    // psi is max-normalized and the ground state here is constant
    for (double r : {0.3, 1.0, 2.0, 2.8})
        CHECK(sp.psi_fn(r) == doctest::Approx(1.0).epsilon(1e-9));
    // Richardson beats both raw grids
    CHECK(std::abs(sp.lambda1 - 2.0) < std::abs(sp.lambda1_grid - 2.0));
}

TEST_CASE("product cylinder: flat spectrum with constant ground state") {
    const ModelManifold m(kP, WarpProfile::cylinder(2 * kPi));
    const SpectralResult sp = lambda1_radial(m, 3.0, 2048);
    CHECK(std::abs(sp.lambda1) < 1e-10);
    CHECK(sp.fiber_mode_gap > 0.0);
}

TEST_CASE("flat ball with a cut end reproduces the Dirichlet ground state") {
    // -gamma u'' - gamma (2/r) u' = lambda u on [0, pi], u(pi) = 0:
    // lambda1 = gamma (pi/R)^2 = 3 exactly for R = pi.
    const ModelManifold m(kP, WarpProfile::euclidean(kPi));
    const SpectralResult sp = lambda1_radial(m, 3.0, 8192);
    CHECK(sp.lambda1 == doctest::Approx(3.0).epsilon(1e-7));
    // ground state sin(r)/r, max-normalized at the pole
    CHECK(sp.psi_fn(kPi / 2) == doctest::Approx(2.0 / kPi).epsilon(1e-4));
}

TEST_CASE("warped circle eigenvalue is stable under refinement") {
    const ModelManifold m(kP, WarpProfile::warped_circle(2 * kPi, 0.3));
    const SpectralResult coarse = lambda1_radial(m, 3.0, 2048);
    const SpectralResult fine = lambda1_radial(m, 3.0, 8192);
    CHECK(std::abs(coarse.lambda1 - fine.lambda1) < 1e-6);
    CHECK(fine.fiber_mode_gap >= 0.0);
}

TEST_CASE("rayleigh quotient upper-bounds the ground state energy") {
    std::mt19937_64 rng(321);
    std::uniform_real_distribution<double> coin(-1.0, 1.0);

    const ModelManifold sphere(kP, WarpProfile::sphere(1.0));
    const SpectralResult sp = lambda1_radial(sphere, 3.0, 4096);
    CHECK(rayleigh_quotient(sphere, 3.0, [](double) { return 1.0; },
                            [](double) { return 0.0; }) ==
          doctest::Approx(2.0).epsilon(1e-12));
    for (int trial = 0; trial < 25; ++trial) {
        double a1 = coin(rng), a2 = coin(rng), a3 = coin(rng);
        auto t = [=](double r) {
            return 1.0 + a1 * std::cos(r) + a2 * std::cos(2 * r) + a3 * std::cos(3 * r);
        };
        auto dt = [=](double r) {
            return -a1 * std::sin(r) - 2 * a2 * std::sin(2 * r) - 3 * a3 * std::sin(3 * r);
        };
        CHECK(rayleigh_quotient(sphere, 3.0, t, dt) >= sp.lambda1 - 1e-8);
    }
    CHECK_THROWS_AS(rayleigh_quotient(sphere, 3.0, [](double) { return 0.0; },
                                      [](double) { return 0.0; }),
                    DomainError);
}

TEST_CASE("feeding the eigensolver's own ground state back reproduces lambda1") {
    const ModelManifold m(kP, WarpProfile::warped_circle(2 * kPi, 0.3));
    const SpectralResult sp = lambda1_radial(m, 3.0, 4096);
    const double rq = rayleigh_quotient(m, 3.0, sp.psi_fn, sp.dpsi_fn);
    CHECK(rq >= sp.lambda1 - 1e-8);
    CHECK(rq == doctest::Approx(sp.lambda1).epsilon(1e-5));
}

TEST_CASE("pointwise defect certificate: constant supersolution on the sphere") {
    const ModelManifold m(kP, WarpProfile::sphere(1.0));
    const RadialCandidate one{[](double) { return 1.0; }, [](double) { return 0.0; },
                              [](double) { return 0.0; }};
    const DefectProfile d =
        supersolution_defect(m, 3.0, 2.0, 0.2, one, 0.0, kPi, 2048);
    // D = Ric - (lambda - epsilon) = 0.2 everywhere
    CHECK(d.min == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(d.nonnegative());
    CHECK(d.min_over_u == doctest::Approx(0.2).epsilon(1e-10));
}

TEST_CASE("certificate and eigensolve stay consistent on closed models") {
    const ModelManifold m(kP, WarpProfile::sphere(1.0));
    const RadialCandidate one{[](double) { return 1.0; }, [](double) { return 0.0; },
                              [](double) { return 0.0; }};
    const ConsistencyReport rep = eig_vs_defect_consistency(m, 3.0, 2.0, 0.2, one, 2048);
    CHECK(rep.consistent);
    CHECK(rep.certificate_holds);
    CHECK(rep.eigensolve_ran);
    CHECK(rep.lambda1 >= 2.0 - 0.2 - rep.slack);

    // open models cannot run the eigensolve side; vacuously consistent
    const ModelManifold open(kP, WarpProfile::euclidean(1.0));
    const ConsistencyReport vac = eig_vs_defect_consistency(open, 3.0, 0.1, 0.2, one, 512);
    CHECK(vac.consistent);
    CHECK_FALSE(vac.eigensolve_ran);
}
