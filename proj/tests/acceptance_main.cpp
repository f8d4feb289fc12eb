// End-to-end acceptance suite. Each criterion prints one [PASS]/[FAIL] line
// with its measured values and pinned tolerances; the exit status is the
// number of failing criteria (0 = all green). Unlike the unit tests, which
// pin frozen regression values, everything here is checked against exact
// targets or structural inequalities only.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "spectun/config.hpp"
#include "spectun/errors.hpp"
#include "spectun/experiments.hpp"
#include "spectun/geometry.hpp"
#include "spectun/green.hpp"
#include "spectun/model.hpp"
#include "spectun/neck.hpp"
#include "spectun/spectral.hpp"
#include "spectun/tunnel.hpp"
#include "spectun/warp.hpp"

using namespace spectun;

namespace {

constexpr double kPi = 3.14159265358979323846;
int g_failures = 0;

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

void report(bool ok, const std::string& name, const std::string& detail) {
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!ok) ++g_failures;
}

template <class Body>
void criterion(const std::string& name, Body&& body) {
    try {
        body(name);
    } catch (const std::exception& e) {
        report(false, name, std::string("unexpected error: ") + e.what());
    }
}

ModelManifold marked_sphere(const Params& p) {
    return ModelManifold(p, WarpProfile::sphere(1.0), {0.0}, "sphere");
}

// Shared across criteria so the expensive flagship assembly runs once.
std::optional<TunnelAssembly> g_flagship;
std::vector<double> g_fiber_gaps;

void cone_identity(const std::string& name) {
    const NeckProfile f = NeckProfile::canonical();
    double worst = 0.0;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int n : {3, 4, 5}) {
        worst = std::max(worst, toy_identity_scan(f, n, 4096).max_rel_defect);
        const double coarse = toy_identity_scan_fd(f, n, 1024).max_rel_defect;
        const double fine = toy_identity_scan_fd(f, n, 4096).max_rel_defect;
        min_ratio = std::min(min_ratio, coarse / fine);
    }
    const bool ok = worst <= 1e-10 && min_ratio >= 10.0;
    report(ok, name,
           fmt("n in {3,4,5}: max relative residual %.3g (<= 1e-10), "
               "4x-refinement drop %.2f (>= 10)",
               worst, min_ratio));
}

void space_forms(const std::string& name) {
    double worst = 0.0;
    for (int n : {3, 4, 5}) {
        const struct {
            WarpProfile warp;
            double want;
        } cases[] = {
            {WarpProfile::euclidean(3.0), 0.0},
            {WarpProfile::sphere(1.0), double(n - 1)},
            {WarpProfile::hyperbolic_cap(3.0), -double(n - 1)},
        };
        for (const auto& c : cases) {
            const double lo = c.warp.r_min() + 0.05 * c.warp.length();
            const double hi = c.warp.r_max() - 0.05 * c.warp.length();
            const double scale = std::max(1.0, std::abs(c.want));
            for (int i = 0; i < 1000; ++i) {
                const double r = lo + (hi - lo) * (i + 0.5) / 1000.0;
                worst = std::max(
                    {worst, std::abs(ricci_radial(c.warp, n, r) - c.want) / scale,
                     std::abs(ricci_tangential(c.warp, n, r) - c.want) / scale});
            }
        }
    }
    report(worst <= 1e-12, name,
           fmt("flat / round / hyperbolic caps, n in {3,4,5}, 1000 points each: "
               "max relative error %.3g (<= 1e-12)",
               worst));
}

void neck_admissibility(const std::string& name) {
    const NeckProfile f = NeckProfile::canonical();
    const ConstraintReport rep = f.validate();
    std::size_t checked = 0;
    for (const auto& e : rep.entries) checked += e.checked ? 1 : 0;
    const bool all_checked = checked == rep.entries.size();

    const ConstraintReport::Entry slack = f.bending_margin(4096);
    // strictly positive away from the junction, zero only in the limit x -> 1
    double interior_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 2048; ++i) {
        const double x = 0.5 + (0.97 - 0.5) * i / 2048.0;
        interior_min = std::min(interior_min, f.margin(x));
    }
    const bool ok = rep.ok() && all_checked && slack.worst >= -1e-12 &&
                    std::abs(slack.location - 1.0) < 1e-3 && interior_min > 0.0;
    report(ok, name,
           fmt("%zu/%zu constraints pass, bending slack on [1/2,1] %.3g "
               "(>= -1e-12) at x = %.4f, interior floor %.3g > 0",
               checked, rep.entries.size(), slack.worst, slack.location,
               interior_min));
}

void green_exactness(const std::string& name) {
    // flat chart tuned so the zeroth-order term drops out: u = b s^{2-n}
    // exactly, i.e. the normalized profile w is identically 1
    const Params flat(3, 3.0, 0.2, 0.4);
    const GreenSolution ball =
        green_solve(ModelManifold(flat, WarpProfile::euclidean(3.0), {0.0}));
    double w_dev = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double s = 1e-4 * std::pow(2.9e4, i / 200.0);
        w_dev = std::max(w_dev, std::abs(ball.w(0, s) - 1.0));
    }
    const double mass_err = std::abs(ball.meta().mass[0] - 1.0);

    const Params p(3, 3.0, 2.0, 0.2);
    const std::array<RateReport, 3> rates =
        green_asymptotics_check(green_solve(marked_sphere(p)));
    bool rates_ok = true;
    std::size_t levels = 99;
    for (const auto& r : rates) {
        rates_ok = rates_ok && r.passed;
        levels = std::min(levels, r.samples.size());
    }
    const bool ok = w_dev <= 1e-9 && mass_err <= 1e-6 && rates_ok && levels >= 6;
    report(ok, name,
           fmt("flat-chart |w-1| %.3g (<= 1e-9), delta mass error %.3g (<= 1e-6), "
               "round-sphere decay rates %s over %zu dyadic radii",
               w_dev, mass_err, rates_ok ? "pass" : "FAIL", levels));
}

void dumbbell_pipeline(const std::string& name) {
    const Params p(3, 3.0, 2.0, 0.2);
    const TunnelContext ctx =
        TunnelContext::connected_sum(marked_sphere(p), marked_sphere(p));
    const NeckProfile f = NeckProfile::canonical();
    const R0SearchResult sr = r0_search(ctx, f);
    g_flagship.emplace(assemble_tunnel(ctx, sr.r0_star, f));
    const TunnelAssembly& a = *g_flagship;
    const RegionDefectReport scan = region_defect_scan(a);
    const SpectralResult sp = lambda1_radial(a.assembled, p.gamma, 32768);
    g_fiber_gaps.push_back(sp.fiber_mode_gap);
    const bool ok = sr.r0_star > 0.0 && scan.min >= 0.0 &&
                    a.interface.worst <= 1e-8 && sp.lambda1 >= 1.8 - 1e-5;
    report(ok, name,
           fmt("two spheres joined at r0 = %.4g: min defect %.3g (>= 0), "
               "interface gap %.3g (<= 1e-8), lambda1 %.8f (>= 1.8 - 1e-5)",
               sr.r0_star, scan.min, a.interface.worst, sp.lambda1));
}

void handle_pipeline(const std::string& name) {
    const Params p(3, 3.0, 2.0, 0.2);
    const TunnelContext ctx = TunnelContext::handle(
        ModelManifold(p, WarpProfile::sphere(1.0), {0.0, kPi}, "sphere"));
    const NeckProfile f = NeckProfile::canonical();
    const R0SearchResult sr = r0_search(ctx, f);
    const TunnelAssembly a = assemble_tunnel(ctx, sr.r0_star, f);
    const SpectralResult sp = lambda1_radial(a.assembled, p.gamma, 32768);
    g_fiber_gaps.push_back(sp.fiber_mode_gap);
    const double floor = p.lambda - p.epsilon - 1e-5;
    const bool ok = a.assembled.warp.is_circle() && sp.lambda1 >= floor &&
                    sp.lambda1 > 0.0;
    report(ok, name,
           fmt("self-join of one sphere gives a periodic model, circumference "
               "%.6f, lambda1 %.8f (>= %.5f > 0)",
               a.assembled.warp.length(), sp.lambda1, floor));
}

void sharpness_control(const std::string& name) {
    const NeckProfile f = NeckProfile::canonical();

    // below the threshold the neck bending has the wrong sign at the center,
    // at every scale
    const Params sub(3, 1.9, 2.0, 0.2);
    const TunnelContext ctx_sub =
        TunnelContext::connected_sum(marked_sphere(sub), marked_sphere(sub));
    int tested = 0;
    bool all_negative = true;
    for (double r0 = ctx_sub.r0_max(); r0 >= 1e-4; r0 /= 2) {
        const RegionDefectReport rep =
            region_defect_scan(assemble_tunnel(ctx_sub, r0, f), 2048);
        std::size_t mid = 0;
        for (std::size_t i = 0; i < rep.core.r.size(); ++i)
            if (std::abs(rep.core.r[i]) < std::abs(rep.core.r[mid])) mid = i;
        all_negative = all_negative && rep.core.defect[mid] < 0.0;
        ++tested;
    }
    bool refused = false;
    try {
        r0_search(ctx_sub, f);
    } catch (const NotAdmissible&) {
        refused = true;
    }

    const Params above(3, 2.5, 2.0, 0.2);
    const double r0_above =
        r0_search(TunnelContext::connected_sum(marked_sphere(above),
                                               marked_sphere(above)),
                  f)
            .r0_star;

    // the sweep runner localizes the flip between the same two gammas
    ExperimentConfig cfg = preset_config("sharpness");
    cfg.out_dir = "acceptance_out/sharpness";
    cfg.quiet = true;
    const RunReport rep = run_experiment(cfg);
    const double gamma_hat = rep.scalars.at("gamma_hat");

    const bool ok = tested >= 8 && all_negative && refused && r0_above > 0.0 &&
                    gamma_hat > 2.0 && gamma_hat <= 2.5 && rep.all_passed();
    report(ok, name,
           fmt("gamma 1.9: center defect < 0 at all %d dyadic scales and the "
               "search refuses; gamma 2.5: r0 = %.4g; sweep flips at gamma_hat "
               "= %.4g in (2, 2.5]",
               tested, r0_above, gamma_hat));
}

void blend_decay(const std::string& name) {
    // epsilon = 1 lifts the neck-scale ceiling to 0.1 so the whole dyadic
    // range 2^-4 .. 2^-10 is assemblable
    const Params p(3, 3.0, 2.0, 1.0);
    const TunnelContext ctx =
        TunnelContext::connected_sum(marked_sphere(p), marked_sphere(p));
    const std::array<RateReport, 6> reports = blend_asymptotics(ctx, 4, 10);
    bool ok = true;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const auto& r : reports) {
        ok = ok && r.passed;
        min_margin = std::min(min_margin, r.margin);
    }
    report(ok, name,
           fmt("six blend decay rates over r0 = 2^-4 .. 2^-10 %s, worst "
               "log-log slope margin %.3f (>= 0)",
               ok ? "pass" : "FAIL", min_margin));
}

void structural_checks(const std::string& name) {
    // curvature through the surgery decomposition vs the direct warp formulas
    if (!g_flagship) {
        const Params p(3, 3.0, 2.0, 0.2);
        const TunnelContext ctx =
            TunnelContext::connected_sum(marked_sphere(p), marked_sphere(p));
        g_flagship.emplace(
            assemble_tunnel(ctx, r0_search(ctx, NeckProfile::canonical()).r0_star));
    }
    const TunnelAssembly& a = *g_flagship;
    double two_route = 0.0, mixed = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double r = -a.r0 + 2 * a.r0 * i / 400.0;
        const CurvatureSample direct = curvature(a.assembled.warp, a.params.n, r);
        const CurvatureSample split = decomposed_curvature(a, r);
        const double phi = a.Phi(r);
        const double scale =
            std::max({1.0, std::abs(direct.ric_rr), std::abs(direct.ric_ee),
                      1.0 / (phi * phi)});
        two_route = std::max({two_route,
                              std::abs(direct.ric_rr - split.ric_rr) / scale,
                              std::abs(direct.ric_ee - split.ric_ee) / scale});
        mixed = std::max(mixed, std::abs(split.ric_mixed));
    }

    // randomized Rayleigh probes on smooth closed models; every quotient must
    // sit above the eigensolver's lambda1
    const Params p(3, 3.0, 2.0, 0.2);
    const ModelManifold models[] = {
        ModelManifold(p, WarpProfile::sphere(1.0)),
        ModelManifold(p, WarpProfile::warped_circle(2 * kPi, 0.3)),
        ModelManifold(p, WarpProfile::cylinder(2 * kPi)),
    };
    std::mt19937_64 rng(24601);
    std::uniform_real_distribution<double> coin(-1.0, 1.0);
    double min_slack = std::numeric_limits<double>::infinity();
    for (const ModelManifold& m : models) {
        const SpectralResult sp = lambda1_radial(m, p.gamma, 4096);
        g_fiber_gaps.push_back(sp.fiber_mode_gap);
        const double L = m.warp.length();
        for (int trial = 0; trial < 100; ++trial) {
            double c[3], s[3];
            for (int k = 0; k < 3; ++k) {
                c[k] = coin(rng);
                s[k] = m.warp.is_circle() ? coin(rng) : 0.0;
            }
            // smooth closed test functions: cosine series on two-pole
            // intervals (flat at the poles), full Fourier series on circles
            auto t = [&m, L, &c, &s](double r) {
                double v = 1.0;
                for (int k = 1; k <= 3; ++k) {
                    const double w = 2 * kPi * k * (m.warp.is_circle() ? 1.0 : 0.5) / L;
                    v += c[k - 1] * std::cos(w * r) + s[k - 1] * std::sin(w * r);
                }
                return v;
            };
            auto dt = [&m, L, &c, &s](double r) {
                double v = 0.0;
                for (int k = 1; k <= 3; ++k) {
                    const double w = 2 * kPi * k * (m.warp.is_circle() ? 1.0 : 0.5) / L;
                    v += w * (-c[k - 1] * std::sin(w * r) + s[k - 1] * std::cos(w * r));
                }
                return v;
            };
            min_slack =
                std::min(min_slack, rayleigh_quotient(m, p.gamma, t, dt) - sp.lambda1);
        }
    }
    double min_gap = std::numeric_limits<double>::infinity();
    for (double g : g_fiber_gaps) min_gap = std::min(min_gap, g);

    const bool ok = two_route <= 1e-10 && mixed <= 1e-12 && min_gap >= 0.0 &&
                    min_slack >= -1e-8;
    report(ok, name,
           fmt("two-route curvature gap %.3g (<= 1e-10), mixed component %.3g "
               "(<= 1e-12), fiber gap min %.3g over %zu eigensolves (>= 0), "
               "Rayleigh slack min %.3g over 300 probes (>= -1e-8)",
               two_route, mixed, min_gap, g_fiber_gaps.size(), min_slack));
}

}  // namespace

int main() {
    criterion("cone identity residual", cone_identity);
    criterion("space-form curvature exactness", space_forms);
    criterion("neck profile admissibility", neck_admissibility);
    criterion("delta-source solver exactness", green_exactness);
    criterion("two-sphere join pipeline", dumbbell_pipeline);
    criterion("handle pipeline", handle_pipeline);
    criterion("threshold sharpness control", sharpness_control);
    criterion("blend decay rates", blend_decay);
    criterion("structural cross-checks", structural_checks);

    if (g_failures == 0)
        std::printf("acceptance: all 9 criteria pass\n");
    else
        std::printf("acceptance: %d of 9 criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
