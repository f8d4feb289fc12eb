#include "spectun/tunnel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "spectun/errors.hpp"
#include "spectun/geometry.hpp"

namespace spectun {

namespace {

constexpr double kInterfaceTol = 1e-8;
constexpr double kR0Floor = 1e-4;

double threshold_gamma(int n) { return double(n - 1) / double(n - 2); }

WarpProfile cone_metric(const NeckProfile& f) {
    Interval dom{-2.0, 2.0, EndKind::Boundary, EndKind::Boundary};
    return WarpProfile::from_callables(
        dom, "cone", [f](double x) { return f.f(x); }, [f](double x) { return f.df(x); },
        [f](double x) { return f.ddf(x); });
}

double cone_defect(const WarpProfile& w, int n, double gamma, double r) {
    const double v = w.phi(r);
    const double dv = w.dphi(r);
    const double ddv = w.ddphi(r);
    const double u = std::pow(v, 2.0 - n);
    const RadialFunction rf{u, (2.0 - n) * std::pow(v, 1.0 - n) * dv,
                            (2.0 - n) * (1.0 - n) * std::pow(v, -double(n)) * dv * dv +
                                (2.0 - n) * std::pow(v, 1.0 - n) * ddv};
    return -gamma * laplacian_radial(w, n, r, rf) + ricci_radial(w, n, r) * u;
}

double side_direction(const WarpProfile& w, double bp) {
    return bp <= w.r_min() + 1e-12 ? 1.0 : -1.0;
}

/// Frozen per-side view used by the blend and assembly closures, so they stay
/// valid after the context goes away.
struct SideData {
    WarpProfile warp;
    double bp;
    double dir;
    double span;
    std::shared_ptr<const GreenSolution> green;
    int bp_index;

    FiberFactor fiber(double s) const { return fiber_factor(warp, bp, s); }
    RadialFunction w_s(double s) const {
        return {green->w(bp_index, s), green->dw(bp_index, s), green->ddw(bp_index, s)};
    }
    RadialFunction phi_s(double s) const {
        const double r = bp + dir * s;
        return {warp.phi(r), dir * warp.dphi(r), warp.ddphi(r)};
    }
    RadialFunction u_s(double s) const {
        const double r = bp + dir * s;
        return {green->u(r), dir * green->du(r), green->ddu(r)};
    }
};

using Sides = std::array<SideData, 2>;

std::shared_ptr<const Sides> snapshot(const TunnelContext& ctx) {
    auto g0 = std::make_shared<const GreenSolution>(ctx.green(0));
    auto g1 = ctx.topology() == TunnelTopology::Handle
                  ? g0
                  : std::make_shared<const GreenSolution>(ctx.green(1));
    const int i1 = ctx.topology() == TunnelTopology::Handle ? 1 : 0;
    Sides s{SideData{ctx.model(0).warp, ctx.basepoint(0),
                     side_direction(ctx.model(0).warp, ctx.basepoint(0)), ctx.chart_span(0),
                     std::move(g0), 0},
            SideData{ctx.model(1).warp, ctx.basepoint(1),
                     side_direction(ctx.model(1).warp, ctx.basepoint(1)), ctx.chart_span(1),
                     std::move(g1), i1}};
    return std::make_shared<const Sides>(std::move(s));
}

/// Tunnel-local warp Phi = r0 f(r/r0) sqrt(beta) and candidate
/// u = b (r0 f)^{2-n} wtilde, with r-derivatives.
struct TunnelFns {
    double r0;
    int n;
    double b;
    std::shared_ptr<const NeckProfile> f;
    BlendedData bd;

    RadialFunction warp_at(double r) const {
        const double x = r / r0;
        const double fv = f->f(x), fd = f->df(x), fdd = f->ddf(x) / r0;
        const double big = r0 * fv;
        const double be = bd.beta(r), db = bd.dbeta(r), ddb = bd.ddbeta(r);
        const double sb = std::sqrt(be);
        const double h1 = db / (2.0 * sb);
        const double h2 = ddb / (2.0 * sb) - db * db / (4.0 * be * sb);
        return {big * sb, fd * sb + big * h1, fdd * sb + 2.0 * fd * h1 + big * h2};
    }
    RadialFunction cand_at(double r) const {
        const double x = r / r0;
        const double fv = f->f(x), fd = f->df(x), fdd = f->ddf(x) / r0;
        const double big = r0 * fv;
        const double p = std::pow(big, 2.0 - n);
        const double p1 = (2.0 - n) * std::pow(big, 1.0 - n) * fd;
        const double p2 = (2.0 - n) * (1.0 - n) * std::pow(big, -double(n)) * fd * fd +
                          (2.0 - n) * std::pow(big, 1.0 - n) * fdd;
        const double wv = bd.wtilde(r), dw = bd.dwtilde(r), ddw = bd.ddwtilde(r);
        return {b * p * wv, b * (p1 * wv + p * dw), b * (p2 * wv + 2.0 * p1 * dw + p * ddw)};
    }
};

/// Piecewise global profile: tunnel formulas on |t| <= r0, ambient data
/// beyond. Circle coordinates wrap into [-r0, length - r0), and the ambient
/// stretch of a handle is addressed through side 1's chart.
struct GluedFns {
    TunnelFns tun;
    std::shared_ptr<const Sides> sides;
    bool circle;
    double length;

    double wrapped(double t) const {
        if (!circle) return t;
        return t - length * std::floor((t + tun.r0) / length);
    }
    RadialFunction warp_at(double t) const {
        t = wrapped(t);
        if (std::abs(t) <= tun.r0) return tun.warp_at(t);
        if (circle || t > 0.0) return (*sides)[1].phi_s(t);
        const RadialFunction a = (*sides)[0].phi_s(-t);
        return {a.f, -a.df, a.ddf};
    }
    RadialFunction cand_at(double t) const {
        t = wrapped(t);
        if (std::abs(t) <= tun.r0) return tun.cand_at(t);
        if (circle || t > 0.0) return (*sides)[1].u_s(t);
        const RadialFunction a = (*sides)[0].u_s(-t);
        return {a.f, -a.df, a.ddf};
    }
};

}  // namespace

double toy_identity_defect(const NeckProfile& f, int n, double r, double gamma) {
    if (n < 3) throw DomainError("toy_identity_defect: n must be >= 3");
    if (std::abs(r) > 2.0) throw DomainError("toy_identity_defect: |r| must be <= 2");
    return cone_defect(cone_metric(f), n, gamma, r);
}

double toy_identity_defect(const NeckProfile& f, int n, double r) {
    return toy_identity_defect(f, n, r, threshold_gamma(n));
}

ToyIdentityScan toy_identity_scan(const NeckProfile& f, int n, int grid) {
    if (n < 3 || grid < 8) throw DomainError("toy_identity_scan: bad arguments");
    const WarpProfile w = cone_metric(f);
    const double gamma = threshold_gamma(n);
    ToyIdentityScan out;
    out.grid = grid;
    out.h = 4.0 / grid;
    for (int i = 0; i <= grid; ++i) {
        const double r = -2.0 + out.h * i;
        const double rel =
            std::abs(cone_defect(w, n, gamma, r)) * std::pow(f.f(r), double(n - 2));
        if (rel > out.max_rel_defect) {
            out.max_rel_defect = rel;
            out.argmax = r;
        }
    }
    return out;
}

ToyIdentityScan toy_identity_scan_fd(const NeckProfile& f, int n, int grid) {
    if (n < 3 || grid < 8) throw DomainError("toy_identity_scan_fd: bad arguments");
    const double gamma = threshold_gamma(n);
    ToyIdentityScan out;
    out.grid = grid;
    out.h = 4.0 / grid;
    const double h = out.h;
    for (int i = 1; i < grid; ++i) {
        const double r = -2.0 + h * i;
        const double fm = f.f(r - h), f0 = f.f(r), fp = f.f(r + h);
        const double um = std::pow(fm, 2.0 - n);
        const double u0 = std::pow(f0, 2.0 - n);
        const double up = std::pow(fp, 2.0 - n);
        const double du = (up - um) / (2.0 * h);
        const double ddu = (up - 2.0 * u0 + um) / (h * h);
        const double dfd = (fp - fm) / (2.0 * h);
        const double ddfd = (fp - 2.0 * f0 + fm) / (h * h);
        const double lap = ddu + (n - 1) * (dfd / f0) * du;
        const double d = -gamma * lap - (n - 1) * (ddfd / f0) * u0;
        const double rel = std::abs(d) / u0;
        if (rel > out.max_rel_defect) {
            out.max_rel_defect = rel;
            out.argmax = r;
        }
    }
    return out;
}

TunnelContext TunnelContext::connected_sum(ModelManifold left, ModelManifold right) {
    if (left.basepoints.size() != 1 || right.basepoints.size() != 1)
        throw DomainError("connected_sum: each model needs exactly one basepoint");
    const Params& a = left.params;
    const Params& b = right.params;
    if (a.n != b.n || a.gamma != b.gamma || a.lambda != b.lambda || a.epsilon != b.epsilon)
        throw DomainError("connected_sum: the two models must share parameters");
    TunnelContext ctx;
    ctx.topo_ = TunnelTopology::ConnectedSum;
    ctx.models_.reserve(2);
    ctx.models_.push_back(std::move(left));
    ctx.models_.push_back(std::move(right));
    ctx.greens_.reserve(2);
    ctx.greens_.push_back(green_solve(ctx.models_[0]));
    ctx.greens_.push_back(green_solve(ctx.models_[1]));
    ctx.model_of_side_ = {0, 1};
    ctx.basepoint_of_side_ = {ctx.models_[0].basepoints[0], ctx.models_[1].basepoints[0]};
    return ctx;
}

TunnelContext TunnelContext::handle(ModelManifold m) {
    if (m.basepoints.size() != 2)
        throw DomainError("handle: the model needs two basepoints");
    TunnelContext ctx;
    ctx.topo_ = TunnelTopology::Handle;
    ctx.models_.push_back(std::move(m));
    ctx.greens_.push_back(green_solve(ctx.models_[0]));
    ctx.model_of_side_ = {0, 0};
    ctx.basepoint_of_side_ = {ctx.models_[0].basepoints[0], ctx.models_[0].basepoints[1]};
    return ctx;
}

double TunnelContext::chart_span(int side) const {
    return model(side).chart_radius(basepoint_of_side_[side]);
}

double TunnelContext::separation() const {
    return topo_ == TunnelTopology::Handle ? models_[0].separation()
                                           : std::numeric_limits<double>::infinity();
}

double TunnelContext::r0_max() const {
    return 0.1 * std::min({1.0, separation(), params().epsilon});
}

FiberFactor TunnelContext::fiber(int side, double s) const {
    return fiber_factor(model(side).warp, basepoint_of_side_[side], s);
}

RadialFunction TunnelContext::green_w(int side, double s) const {
    const GreenSolution& g = green(side);
    const int idx = topo_ == TunnelTopology::Handle ? side : 0;
    return {g.w(idx, s), g.dw(idx, s), g.ddw(idx, s)};
}

RadialFunction TunnelContext::ambient_phi(int side, double s) const {
    const WarpProfile& w = model(side).warp;
    const double bp = basepoint_of_side_[side];
    const double dir = side_direction(w, bp);
    const double r = bp + dir * s;
    return {w.phi(r), dir * w.dphi(r), w.ddphi(r)};
}

RadialFunction TunnelContext::ambient_u(int side, double s) const {
    const GreenSolution& g = green(side);
    const double bp = basepoint_of_side_[side];
    const double dir = side_direction(model(side).warp, bp);
    const double r = bp + dir * s;
    return {g.u(r), dir * g.du(r), g.ddu(r)};
}

BlendedData blend_profiles(const TunnelContext& ctx, double r0) {
    if (!(r0 > 0.0)) throw DomainError("blend_profiles: r0 must be positive");
    if (!(r0 <= ctx.r0_max() * (1.0 + 1e-12))) {
        std::ostringstream msg;
        msg << "blend_profiles: r0 = " << r0 << " exceeds the ceiling " << ctx.r0_max()
            << " = 0.1 min{1, separation, epsilon}";
        throw DomainError(msg.str());
    }
    auto sides = snapshot(ctx);
    BlendedData bd;
    bd.r0 = r0;
    // Inside |r| <= r0/3 the cutoff vanishes identically, so the ambient data
    // (singular at s = 0) is never touched there.
    bd.beta = [sides, r0](double r) {
        const double x = std::clamp(r / r0, -1.0, 1.0);
        if (std::abs(x) <= 1.0 / 3.0) return 1.0;
        const FiberFactor fb = (*sides)[x < 0.0 ? 0 : 1].fiber(std::abs(x) * r0);
        return 1.0 + cutoff(x) * (fb.a - 1.0);
    };
    bd.dbeta = [sides, r0](double r) {
        const double x = std::clamp(r / r0, -1.0, 1.0);
        if (std::abs(x) <= 1.0 / 3.0) return 0.0;
        const double sg = x < 0.0 ? -1.0 : 1.0;
        const FiberFactor fb = (*sides)[x < 0.0 ? 0 : 1].fiber(std::abs(x) * r0);
        return cutoff_d(x) / r0 * (fb.a - 1.0) + cutoff(x) * sg * fb.da;
    };
    bd.ddbeta = [sides, r0](double r) {
        const double x = std::clamp(r / r0, -1.0, 1.0);
        if (std::abs(x) <= 1.0 / 3.0) return 0.0;
        const double sg = x < 0.0 ? -1.0 : 1.0;
        const FiberFactor fb = (*sides)[x < 0.0 ? 0 : 1].fiber(std::abs(x) * r0);
        return cutoff_dd(x) / (r0 * r0) * (fb.a - 1.0) + 2.0 * cutoff_d(x) / r0 * sg * fb.da +
               cutoff(x) * fb.dda;
    };
    bd.wtilde = [sides, r0](double r) {
        const double x = std::clamp(r / r0, -1.0, 1.0);
        if (std::abs(x) <= 1.0 / 3.0) return 1.0;
        const RadialFunction w = (*sides)[x < 0.0 ? 0 : 1].w_s(std::abs(x) * r0);
        return 1.0 + cutoff(x) * (w.f - 1.0);
    };
    bd.dwtilde = [sides, r0](double r) {
        const double x = std::clamp(r / r0, -1.0, 1.0);
        if (std::abs(x) <= 1.0 / 3.0) return 0.0;
        const double sg = x < 0.0 ? -1.0 : 1.0;
        const RadialFunction w = (*sides)[x < 0.0 ? 0 : 1].w_s(std::abs(x) * r0);
        return cutoff_d(x) / r0 * (w.f - 1.0) + cutoff(x) * sg * w.df;
    };
    bd.ddwtilde = [sides, r0](double r) {
        const double x = std::clamp(r / r0, -1.0, 1.0);
        if (std::abs(x) <= 1.0 / 3.0) return 0.0;
        const double sg = x < 0.0 ? -1.0 : 1.0;
        const RadialFunction w = (*sides)[x < 0.0 ? 0 : 1].w_s(std::abs(x) * r0);
        return cutoff_dd(x) / (r0 * r0) * (w.f - 1.0) + 2.0 * cutoff_d(x) / r0 * sg * w.df +
               cutoff(x) * w.ddf;
    };
    return bd;
}

std::array<RateReport, 6> blend_asymptotics(const TunnelContext& ctx, int k_lo, int k_hi) {
    if (k_hi < k_lo) throw DomainError("blend_asymptotics: empty level range");
    std::array<std::vector<RateSample>, 6> samples;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double r0 = std::ldexp(1.0, -k);
        const BlendedData bd = blend_profiles(ctx, r0);
        double sup[6] = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
        const int m = 800;
        for (int i = 0; i <= m; ++i) {
            const double r = -r0 + 2.0 * r0 * i / m;
            sup[0] = std::max(sup[0], std::abs(bd.beta(r) - 1.0));
            sup[1] = std::max(sup[1], std::abs(bd.dbeta(r)));
            sup[2] = std::max(sup[2], std::abs(bd.ddbeta(r)));
            sup[3] = std::max(sup[3], std::abs(bd.wtilde(r) - 1.0));
            sup[4] = std::max(sup[4], std::abs(bd.dwtilde(r)));
            sup[5] = std::max(sup[5], std::abs(bd.ddwtilde(r)));
        }
        for (int j = 0; j < 6; ++j) samples[j].push_back({r0, sup[j]});
    }
    return {rate_check(samples[0], 0, "|beta - 1|"), rate_check(samples[1], 1, "|beta'|"),
            rate_check(samples[2], 2, "|beta''|"),   rate_check(samples[3], 0, "|w - 1|"),
            rate_check(samples[4], 1, "|w'|"),       rate_check(samples[5], 2, "|w''|")};
}

TunnelAssembly assemble_tunnel(const TunnelContext& ctx, double r0, const NeckProfile& f) {
    const Params P = ctx.params();
    BlendedData bd = blend_profiles(ctx, r0);  // validates the scale
    auto sides = snapshot(ctx);
    for (int k : {0, 1}) {
        if (2.0 * r0 < (*sides)[k].span) continue;
        std::ostringstream msg;
        msg << "assemble_tunnel: neck scale " << r0 << " does not fit inside the chart of side "
            << k << " (radius " << (*sides)[k].span << ")";
        throw AssemblyError(msg.str());
    }

    const TunnelFns tun{r0, P.n, (*sides)[0].green->b(),
                        std::make_shared<const NeckProfile>(f), bd};

    // Interface gaps, normalized by the magnitude of the ambient value; the
    // raw second derivative of the candidate grows like s^{-n} and would put
    // plain rounding above any absolute tolerance.
    InterfaceReport rep;
    for (int k : {0, 1}) {
        const double sign = k == 0 ? -1.0 : 1.0;
        const RadialFunction tp = tun.warp_at(sign * r0);
        const RadialFunction tu = tun.cand_at(sign * r0);
        RadialFunction ap = (*sides)[k].phi_s(r0);
        RadialFunction au = (*sides)[k].u_s(r0);
        if (k == 0) {
            ap.df = -ap.df;
            au.df = -au.df;
        }
        const double pg[3] = {std::abs(tp.f - ap.f) / std::max(1.0, std::abs(ap.f)),
                              std::abs(tp.df - ap.df) / std::max(1.0, std::abs(ap.df)),
                              std::abs(tp.ddf - ap.ddf) / std::max(1.0, std::abs(ap.ddf))};
        const double ug[3] = {std::abs(tu.f - au.f) / std::max(1.0, std::abs(au.f)),
                              std::abs(tu.df - au.df) / std::max(1.0, std::abs(au.df)),
                              std::abs(tu.ddf - au.ddf) / std::max(1.0, std::abs(au.ddf))};
        for (int j = 0; j < 3; ++j) {
            rep.phi_gap[j] = std::max(rep.phi_gap[j], pg[j]);
            rep.u_gap[j] = std::max(rep.u_gap[j], ug[j]);
            rep.worst = std::max({rep.worst, pg[j], ug[j]});
        }
    }
    if (!(rep.worst <= kInterfaceTol)) {
        std::ostringstream msg;
        msg << "assemble_tunnel: interface mismatch " << rep.worst << " exceeds "
            << kInterfaceTol;
        throw AssemblyError(msg.str());
    }

    WarpDomain dom;
    std::string name;
    if (ctx.topology() == TunnelTopology::ConnectedSum) {
        const auto far_kind = [](const ModelManifold& m, double bp) {
            const Interval& iv = std::get<Interval>(m.warp.domain());
            return bp <= m.warp.r_min() + 1e-12 ? iv.right : iv.left;
        };
        dom = Interval{-(*sides)[0].span, (*sides)[1].span,
                       far_kind(ctx.model(0), ctx.basepoint(0)),
                       far_kind(ctx.model(1), ctx.basepoint(1))};
        name = ctx.model(0).name + "#" + ctx.model(1).name;
    } else {
        dom = Circle{ctx.separation()};
        name = ctx.model(0).name + "+handle";
    }

    auto glued = std::make_shared<const GluedFns>(
        GluedFns{tun, sides, ctx.topology() == TunnelTopology::Handle,
                 ctx.topology() == TunnelTopology::Handle ? ctx.separation() : 0.0});
    WarpProfile gw = WarpProfile::from_callables(
        dom, name, [glued](double t) { return glued->warp_at(t).f; },
        [glued](double t) { return glued->warp_at(t).df; },
        [glued](double t) { return glued->warp_at(t).ddf; });

    TunnelAssembly out(f, ModelManifold(P, std::move(gw), {}, name));
    out.r0 = r0;
    out.topology = ctx.topology();
    out.params = P;
    out.blend = std::move(bd);
    out.interface = rep;
    auto tun_sp = std::make_shared<const TunnelFns>(tun);
    out.Phi = [tun_sp](double r) { return tun_sp->warp_at(r).f; };
    out.dPhi = [tun_sp](double r) { return tun_sp->warp_at(r).df; };
    out.ddPhi = [tun_sp](double r) { return tun_sp->warp_at(r).ddf; };
    out.u = [tun_sp](double r) { return tun_sp->cand_at(r).f; };
    out.du = [tun_sp](double r) { return tun_sp->cand_at(r).df; };
    out.ddu = [tun_sp](double r) { return tun_sp->cand_at(r).ddf; };
    out.candidate = RadialCandidate{[glued](double t) { return glued->cand_at(t).f; },
                                    [glued](double t) { return glued->cand_at(t).df; },
                                    [glued](double t) { return glued->cand_at(t).ddf; }};

    for (int i = 0; i <= 1000; ++i) {
        const double t = -r0 + 2.0 * r0 * i / 1000.0;
        if (out.Phi(t) > 0.0 && out.u(t) > 0.0) continue;
        std::ostringstream msg;
        msg << "assemble_tunnel: glued profile not positive at r = " << t;
        throw AssemblyError(msg.str());
    }
    return out;
}

TunnelAssembly assemble_tunnel(const TunnelContext& ctx, double r0) {
    return assemble_tunnel(ctx, r0, NeckProfile::canonical());
}

CurvatureSample decomposed_curvature(const TunnelAssembly& a, double r) {
    if (!(std::abs(r) <= a.r0 * (1.0 + 1e-12)))
        throw DomainError("decomposed_curvature: point outside the tunnel");
    const int n = a.params.n;
    const double x = std::clamp(r / a.r0, -1.0, 1.0);
    const double fv = a.neck.f(x), fd = a.neck.df(x), fdd = a.neck.ddf(x) / a.r0;
    const double big = a.r0 * fv;
    // log-derivative of the warp split into neck and blend parts
    const double pp = fd / big;
    const double dpp = fdd / big - pp * pp;
    const double be = a.blend.beta(r), db = a.blend.dbeta(r), ddb = a.blend.ddbeta(r);
    const double q = db / (2.0 * be);
    const double dq = ddb / (2.0 * be) - db * db / (2.0 * be * be);
    const double lg = pp + q;           // Phi'/Phi
    const double dlg = dpp + dq;        // (Phi'/Phi)'
    const double dmean = (n - 1) * dlg;       // dH/dr, H = (n-1) Phi'/Phi
    const double shape2 = (n - 1) * lg * lg;  // |A|^2, the slices are umbilic
    // the fiber gradient of the conformal factor, zero for a radial blend
    const double fiber_grad = 0.0;

    CurvatureSample out;
    out.r = r;
    out.k_rad = -(dlg + lg * lg);
    out.k_sph = 1.0 / (big * big * be) - lg * lg;  // Gauss equation on the fiber
    out.ric_rr = -(dmean + shape2);
    out.ric_ee = out.k_rad + (n - 2) * out.k_sph;
    out.ric_mixed = 0.5 * (n - 2) * fiber_grad;
    out.ric_min = std::min(out.ric_rr, out.ric_ee);
    return out;
}

RegionDefectReport region_defect_scan(const TunnelAssembly& a, int grid) {
    if (grid < 16) throw DomainError("region_defect_scan: grid too small");
    const Params& P = a.params;
    const double r0 = a.r0;
    const double cut = 2.0 * r0 / 3.0;
    RegionDefectReport out;
    out.core = supersolution_defect(a.assembled, P.gamma, P.lambda, P.epsilon, a.candidate,
                                    -cut, cut, grid);
    DefectProfile band = supersolution_defect(a.assembled, P.gamma, P.lambda, P.epsilon,
                                              a.candidate, -r0, -cut, grid / 2);
    const DefectProfile right = supersolution_defect(a.assembled, P.gamma, P.lambda,
                                                     P.epsilon, a.candidate, cut, r0, grid / 2);
    band.r.insert(band.r.end(), right.r.begin(), right.r.end());
    band.defect.insert(band.defect.end(), right.defect.begin(), right.defect.end());
    band.defect_over_u.insert(band.defect_over_u.end(), right.defect_over_u.begin(),
                              right.defect_over_u.end());
    if (right.min < band.min) {
        band.min = right.min;
        band.argmin = right.argmin;
    }
    if (right.min_over_u < band.min_over_u) {
        band.min_over_u = right.min_over_u;
        band.argmin_over_u = right.argmin_over_u;
    }
    out.band = std::move(band);
    if (out.core.min <= out.band.min) {
        out.min = out.core.min;
        out.argmin = out.core.argmin;
    } else {
        out.min = out.band.min;
        out.argmin = out.band.argmin;
    }

    const int m = 256;
    const double coeff = P.gamma * (P.n - 2) - (P.n - 1);
    out.r.reserve(m + 1);
    for (int i = 0; i <= m; ++i) {
        const double r = -r0 + 2.0 * r0 * i / m;
        const double x = r / r0;
        const double fv = a.neck.f(x);
        out.r.push_back(r);
        out.lead.push_back(coeff * a.neck.ddf(x) / (r0 * r0 * fv));
        out.dev_slope.push_back(std::abs(x * a.neck.df(x) / fv - 1.0));
        out.dev_ratio.push_back(std::abs(x / fv - 1.0));
    }
    return out;
}

R0SearchResult r0_scan(const TunnelContext& ctx, const NeckProfile& f) {
    const double hi = ctx.r0_max();
    if (hi < kR0Floor)
        throw DomainError("r0_search: the admissible ceiling sits below the search floor");
    R0SearchResult out;
    for (int j = 0;; ++j) {
        const double r0 = hi * std::pow(2.0, -0.5 * j);
        if (r0 < kR0Floor) break;
        out.tested.push_back(r0);
        double md = std::numeric_limits<double>::quiet_NaN();
        bool ok = false;
        try {
            const TunnelAssembly a = assemble_tunnel(ctx, r0, f);
            md = region_defect_scan(a).min;
            ok = md >= 0.0;
        } catch (const Error&) {
        }
        out.min_defect.push_back(md);
        if (ok) out.admissible.push_back(r0);
    }
    if (!out.admissible.empty())
        out.r0_star = *std::max_element(out.admissible.begin(), out.admissible.end());
    return out;
}

R0SearchResult r0_search(const TunnelContext& ctx, const NeckProfile& f) {
    R0SearchResult out = r0_scan(ctx, f);
    if (out.admissible.empty()) {
        std::ostringstream msg;
        msg << "r0_search: no admissible neck scale in [" << kR0Floor << ", "
            << ctx.r0_max() << "]";
        if (!ctx.params().supercritical())
            msg << "; gamma = " << ctx.params().gamma << " is at or below the threshold "
                << ctx.params().critical_gamma();
        throw NotAdmissible(msg.str());
    }
    return out;
}

}  // namespace spectun
