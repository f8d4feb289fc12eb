#include <cmath>

#include "doctest.h"
#include "spectun/errors.hpp"
#include "spectun/geometry.hpp"
#include "spectun/green.hpp"
#include "spectun/tunnel.hpp"

using namespace spectun;

namespace {
constexpr double kPi = 3.14159265358979323846;

ModelManifold marked_sphere(double gamma) {
    return ModelManifold(Params(3, gamma, 2.0, 0.2), WarpProfile::sphere(1.0), {0.0},
                         "round");
}

const TunnelContext& dumbbell() {
    static const TunnelContext ctx =
        TunnelContext::connected_sum(marked_sphere(3.0), marked_sphere(3.0));
    return ctx;
}
}  // namespace

TEST_CASE("toy identity vanishes at the threshold coupling for every dimension") {
    const NeckProfile f = NeckProfile::canonical();
    for (int n : {3, 4, 5}) {
        const ToyIdentityScan scan = toy_identity_scan(f, n, 2048);
        CHECK(scan.max_rel_defect < 1e-10);
    }
}

TEST_CASE("away from the threshold the toy defect has a closed form") {
    const NeckProfile f = NeckProfile::canonical();
    for (double gamma : {1.0, 2.7, 4.0}) {
        for (int n : {3, 4}) {
            for (double r : {0.0, 0.4, 0.9}) {
                const double lead = gamma * (n - 2) - (n - 1);
                const double want =
                    lead * (f.ddf(r) / f.f(r)) * std::pow(f.f(r), 2 - n);
                CHECK(toy_identity_defect(f, n, r, gamma) ==
                      doctest::Approx(want).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("finite-difference variant converges at second order") {
    const NeckProfile f = NeckProfile::canonical();
    const ToyIdentityScan coarse = toy_identity_scan_fd(f, 3, 1024);
    const ToyIdentityScan fine = toy_identity_scan_fd(f, 3, 4096);
    const double ratio = coarse.max_rel_defect / fine.max_rel_defect;
    CHECK(ratio > 10.0);
    CHECK(ratio < 26.0);
}

TEST_CASE("tunnel context geometry") {
    const TunnelContext& cs = dumbbell();
    CHECK(cs.topology() == TunnelTopology::ConnectedSum);
    CHECK(std::isinf(cs.separation()));
    CHECK(cs.r0_max() == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(cs.chart_span(0) == doctest::Approx(kPi).epsilon(1e-14));

    const ModelManifold ring(Params(3, 3.0, 2.0, 0.2), WarpProfile::sphere(1.0),
                             {0.0, kPi}, "both poles");
    const TunnelContext h = TunnelContext::handle(ring);
    CHECK(h.topology() == TunnelTopology::Handle);
    CHECK(h.separation() == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(h.r0_max() == doctest::Approx(0.02).epsilon(1e-14));
}

TEST_CASE("blended profiles interpolate ambient data exactly across the band") {
    const TunnelContext& ctx = dumbbell();
    const double r0 = 0.01;
    const BlendedData b = blend_profiles(ctx, r0);

    // identically flat on the inner third
    for (double r : {0.0, r0 / 4, -r0 / 3.01}) {
        CHECK(b.beta(r) == 1.0);
        CHECK(b.dbeta(r) == 0.0);
        CHECK(b.wtilde(r) == 1.0);
    }
    // exactly the ambient quantities on the outer third
    for (double r : {0.7 * r0, r0, -0.9 * r0}) {
        const int side = r < 0 ? 0 : 1;
        const double s = std::abs(r);
        CHECK(b.beta(r) == doctest::Approx(ctx.fiber(side, s).a).epsilon(1e-15));
        CHECK(b.wtilde(r) == doctest::Approx(ctx.green_w(side, s).f).epsilon(1e-15));
    }
    // C2 at a spot check against central differences (step large enough that
    // the second difference is not pure rounding noise)
    const double h = 1e-3 * r0;
    const double mid = 0.5 * r0;
    const double fd2 = (b.beta(mid + h) - 2 * b.beta(mid) + b.beta(mid - h)) / (h * h);
    CHECK(b.ddbeta(mid) == doctest::Approx(fd2).epsilon(1e-3));
}

TEST_CASE("blend errors decay at the claimed dyadic rates") {
    // epsilon = 1 lifts the neck-scale ceiling to 0.1 so k = 4 fits
    const ModelManifold wide(Params(3, 3.0, 2.0, 1.0), WarpProfile::sphere(1.0), {0.0});
    const TunnelContext ctx = TunnelContext::connected_sum(wide, wide);
    const auto rates = blend_asymptotics(ctx, 4, 10);
    for (const auto& r : rates) {
        CHECK(r.passed);
        CHECK(r.samples.size() == 7);
    }
    // beta deviations are O(r0^2), wtilde deviations O(r0)
    CHECK(rates[0].slope == doctest::Approx(2.0).epsilon(0.05));
    CHECK(rates[3].slope == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("assembly meets the ambient manifolds to rounding") {
    const TunnelContext& ctx = dumbbell();
    const double r0 = 0.01;
    const TunnelAssembly a = assemble_tunnel(ctx, r0);

    CHECK(a.interface.worst <= 1e-8);
    CHECK(a.assembled.closed());
    CHECK(a.assembled.basepoints.empty());
    CHECK(a.Phi(0.0) == doctest::Approx(r0 * a.neck.f0()).epsilon(1e-12));
    const double b = ctx.green(0).b();
    CHECK(a.u(0.0) == doctest::Approx(b / (r0 * a.neck.f0())).epsilon(1e-12));

    // the candidate continues into the ambient region as the Green solution
    const double span = ctx.chart_span(0);
    const double probe = -(r0 + 0.4);  // tunnel coordinate, side 0
    const double s = std::abs(probe);
    CHECK(a.candidate.u(probe) == doctest::Approx(ctx.green(0).u(s)).epsilon(1e-12));
    CHECK(a.assembled.warp.r_min() == doctest::Approx(-span).epsilon(1e-12));

    CHECK_THROWS_AS(assemble_tunnel(ctx, 0.5), DomainError);
}

TEST_CASE("handle assembly closes into a circle of the right circumference") {
    const ModelManifold ring(Params(3, 3.0, 2.0, 0.2), WarpProfile::sphere(1.0),
                             {0.0, kPi}, "both poles");
    const TunnelContext ctx = TunnelContext::handle(ring);
    const TunnelAssembly a = assemble_tunnel(ctx, 0.001);
    CHECK(a.assembled.warp.is_circle());
    CHECK(a.assembled.warp.length() == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(a.interface.worst <= 1e-8);
    // periodic wrap: the same point from both sides
    const double L = a.assembled.warp.length();
    CHECK(a.candidate.u(-0.002) == doctest::Approx(a.candidate.u(L - 0.002)).epsilon(1e-12));
}

TEST_CASE("supercritical search finds the admissible window of neck scales") {
    const R0SearchResult sr = r0_scan(dumbbell(), NeckProfile::canonical());
    CHECK(sr.tested.size() == 16);
    CHECK(sr.min_defect.size() == sr.tested.size());
    CHECK(sr.admissible.size() == 4);
    CHECK(sr.r0_star == doctest::Approx(8.838834764831846e-4).epsilon(1e-13));
    for (double r0 : sr.admissible) {
        CHECK(r0 >= 3e-4);
        CHECK(r0 <= 9e-4);
    }
    // not monotone: the largest tested scales fail, a middle window passes
    CHECK(sr.min_defect.front() < 0.0);
    CHECK(sr.min_defect.back() < 0.0);
}

TEST_CASE("defect scan splits core and band and is nonnegative at the optimum") {
    const TunnelAssembly a = assemble_tunnel(dumbbell(), 8.838834764831846e-4);
    const RegionDefectReport scan = region_defect_scan(a, 4096);
    CHECK(scan.nonnegative());
    CHECK(scan.min == doctest::Approx(2.8232189412619633).epsilon(1e-9));
    CHECK(scan.core.min >= scan.min);
    CHECK(scan.band.min >= scan.min);
    CHECK(std::min(scan.core.min, scan.band.min) == doctest::Approx(scan.min));
    // the bending lead dominates in the core by orders of magnitude; it
    // vanishes exactly at the junctions where the profile meets the cone
    CHECK(scan.core.min > 1e6);
    for (std::size_t i = 0; i < scan.lead.size(); ++i) {
        if (std::abs(scan.r[i]) < a.r0)
            CHECK(scan.lead[i] > 0.0);
        else
            CHECK(scan.lead[i] == 0.0);
    }
}

TEST_CASE("subcritical coupling admits no neck scale at all") {
    const TunnelContext sub =
        TunnelContext::connected_sum(marked_sphere(1.9), marked_sphere(1.9));
    const NeckProfile f = NeckProfile::canonical();

    const R0SearchResult sr = r0_scan(sub, f);
    CHECK(sr.admissible.empty());
    CHECK(sr.r0_star == 0.0);
    for (double d : sr.min_defect) CHECK(d < 0.0);

    CHECK_THROWS_AS(r0_search(sub, f), NotAdmissible);
    try {
        r0_search(sub, f);
    } catch (const NotAdmissible& e) {
        CHECK(std::string(e.what()).find("gamma") != std::string::npos);
    }
}

TEST_CASE("just above the threshold the construction works again") {
    const TunnelContext near =
        TunnelContext::connected_sum(marked_sphere(2.5), marked_sphere(2.5));
    const R0SearchResult sr = r0_search(near, NeckProfile::canonical());
    CHECK(sr.r0_star > 0.0);
}

TEST_CASE("curvature through the surgery decomposition matches the direct route") {
    const TunnelAssembly a = assemble_tunnel(dumbbell(), 8.838834764831846e-4);
    const int n = a.params.n;
    double worst = 0.0, worst_mixed = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double r = -a.r0 + 2 * a.r0 * i / 400.0;
        const CurvatureSample direct = curvature(a.assembled.warp, n, r);
        const CurvatureSample split = decomposed_curvature(a, r);
        const double phi = a.Phi(r);
        const double scale = std::max(
            {1.0, std::abs(direct.ric_rr), std::abs(direct.ric_ee), 1.0 / (phi * phi)});
        worst = std::max({worst, std::abs(direct.ric_rr - split.ric_rr) / scale,
                          std::abs(direct.ric_ee - split.ric_ee) / scale});
        worst_mixed = std::max(worst_mixed, std::abs(split.ric_mixed));
    }
    CHECK(worst <= 1e-10);
    CHECK(worst_mixed <= 1e-12);
}
