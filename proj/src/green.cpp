#include "spectun/green.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "spectun/errors.hpp"
#include "spectun/geometry.hpp"
#include "spectun/spectral.hpp"

namespace spectun {
namespace detail {

RadialFunction GreenSide::series(double s) const {
    RadialFunction out;
    out.f = coef * (1.0 + r2 * s * s);
    out.df = coef * 2.0 * r2 * s;
    out.ddf = coef * 2.0 * r2;
    if (singular) {
        if (n == 4) {
            const double s2 = s * s;
            out.f += b_eff * (1.0 / s2 + kappa * std::log(s));
            out.df += b_eff * (-2.0 / (s2 * s) + kappa / s);
            out.ddf += b_eff * (6.0 / (s2 * s2) - kappa / s2);
        } else {
            const double p = 2.0 - n;
            const double sp = std::pow(s, p);
            out.f += b_eff * sp * (1.0 + c2 * s * s);
            out.df += b_eff * sp * (p / s + (p + 2.0) * c2 * s);
            out.ddf += b_eff * sp * (p * (p - 1.0) / (s * s) + (p + 2.0) * (p + 1.0) * c2);
        }
    }
    return out;
}

RadialFunction GreenSide::eval_local(double s) const {
    if (pole && s < s0) return series(s);
    const double sc = std::clamp(s, reg.t_min(), reg.t_max());
    RadialFunction out{coef * reg.u(sc), coef * reg.du(sc), coef * reg.ddu(sc)};
    if (has_sing) {
        out.f += b_eff * sing.u(sc);
        out.df += b_eff * sing.du(sc);
        out.ddf += b_eff * sing.ddu(sc);
    }
    return out;
}

}  // namespace detail

namespace {

using detail::GreenSide;

constexpr double kInner = 1e-5;
// Regular-pole families launch further out: the two-term series is still
// exact to ~1e-11 there, while at 1e-5 the huge drift would amplify the
// absolute dense-output error of the tiny derivative.
constexpr double kInnerRegular = 1e-2;

OdeOptions green_ode_options() {
    OdeOptions opts;
    opts.abs_tol = 1e-11;
    opts.rel_tol = 1e-11;
    return opts;
}

// The linear radial equation of one side, in its local coordinate.
struct LocalOde {
    std::function<double(double)> h, q;  // drift and potential term in s

    SecondOrderRhs rhs() const {
        auto hh = h, qq = q;
        return [hh, qq](double s, double u, double v) { return qq(s) * u - hh(s) * v; };
    }
};

struct FrobeniusCoefs {
    double c2 = 0.0, kappa = 0.0, r2 = 0.0;
};

// Series coefficients at a pole with cap coefficient phi3 and q(0) = q0:
// singular family s^{2-n}(1 + c2 s^2) (s^{-2} + kappa log s when n = 4),
// regular family 1 + r2 s^2.
FrobeniusCoefs frobenius_coefs(int n, double phi3, double q0) {
    FrobeniusCoefs fc;
    fc.r2 = q0 / (2.0 * n);
    if (n == 4)
        fc.kappa = 0.5 * (q0 + 12.0 * phi3);
    else
        fc.c2 = (q0 + 2.0 * (n - 1) * (n - 2) * phi3) / (2.0 * (4.0 - n));
    return fc;
}

struct SideSpec {
    int dir = +1;
    double root = 0.0;
    double span = 0.0;
    bool pole = false;
    bool singular = false;
    double b_eff = 0.0;
    double phi3 = 0.0;  // pole ends
    double q0 = 0.0;
    double end_u = 1.0, end_v = 0.0;  // open ends
    int n = 0;
};

GreenSide build_side(const SideSpec& spec, const LocalOde& ode) {
    GreenSide sd;
    sd.dir = spec.dir;
    sd.root = spec.root;
    sd.span = spec.span;
    sd.pole = spec.pole;
    sd.singular = spec.singular;
    sd.b_eff = spec.b_eff;
    sd.n = spec.n;
    sd.s0 = spec.singular ? kInner : kInnerRegular;
    sd.end_u = spec.end_u;
    sd.end_v = spec.end_v;
    if (spec.pole && sd.span <= 2.0 * sd.s0)
        throw DomainError("green side: domain too short for the series handoff");

    const auto rhs = ode.rhs();
    const OdeOptions opts = green_ode_options();
    if (spec.pole) {
        const FrobeniusCoefs fc = frobenius_coefs(spec.n, spec.phi3, spec.q0);
        sd.c2 = fc.c2;
        sd.kappa = fc.kappa;
        sd.r2 = fc.r2;
        const double s0 = sd.s0;
        sd.reg = integrate_second_order(rhs, s0, 1.0 + fc.r2 * s0 * s0,
                                        2.0 * fc.r2 * s0, sd.span, opts);
        if (spec.singular) {
            double u0, v0;
            if (spec.n == 4) {
                u0 = 1.0 / (s0 * s0) + fc.kappa * std::log(s0);
                v0 = -2.0 / (s0 * s0 * s0) + fc.kappa / s0;
            } else {
                const double p = 2.0 - spec.n;
                const double sp = std::pow(s0, p);
                u0 = sp * (1.0 + fc.c2 * s0 * s0);
                v0 = sp * (p / s0 + (p + 2.0) * fc.c2 * s0);
            }
            sd.sing = integrate_second_order(rhs, s0, u0, v0, sd.span, opts);
            sd.has_sing = true;
        }
    } else {
        sd.reg = integrate_second_order(rhs, 0.0, spec.end_u, spec.end_v, sd.span, opts);
    }
    return sd;
}

// Glue u = b_eff S + A F across the match point: continuity of value and of
// the global radial derivative. Returns (A_left, A_right); the system is
// nonsingular whenever the shift is below the spectrum of either half.
std::pair<double, double> match_sides(const GreenSide& L, const GreenSide& R) {
    auto fam = [](const GreenSide& sd, const RadialSolution& tr) {
        return std::pair<double, double>{tr.u(sd.span), tr.du(sd.span)};
    };
    const auto [RL, dRL] = fam(L, L.reg);
    const auto [RR, dRR] = fam(R, R.reg);
    double rhs1 = 0.0, rhs2 = 0.0;
    if (L.has_sing) {
        const auto [SL, dSL] = fam(L, L.sing);
        rhs1 -= L.b_eff * SL;
        rhs2 -= L.dir * L.b_eff * dSL;
    }
    if (R.has_sing) {
        const auto [SR, dSR] = fam(R, R.sing);
        rhs1 += R.b_eff * SR;
        rhs2 += R.dir * R.b_eff * dSR;
    }
    // unknowns (A_L, A_R): A_L RL - A_R RR = rhs1, A_L dirL dRL - A_R dirR dRR = rhs2
    const double a11 = RL, a12 = -RR;
    const double a21 = L.dir * dRL, a22 = -R.dir * dRR;
    const double det = a11 * a22 - a12 * a21;
    const double scale = std::abs(a11 * a22) + std::abs(a12 * a21) + 1e-300;
    if (std::abs(det) < 1e-10 * scale) {
        std::ostringstream msg;
        msg << "matching system degenerate at the glue point: families ("
            << RL << ", " << dRL << ") / (" << RR << ", " << dRR
            << "), det " << det;
        throw SolverDiverged(msg.str());
    }
    const double al = (rhs1 * a22 - a12 * rhs2) / det;
    const double ar = (a11 * rhs2 - rhs1 * a21) / det;
    return {al, ar};
}

// Sup over inter-node midpoints of the normalized ODE defect of the glued
// side; the quintic dense output makes this an honest residual.
double side_residual(const GreenSide& sd, const LocalOde& ode) {
    std::vector<double> nodes = sd.reg.nodes();
    if (sd.has_sing) {
        const auto& extra = sd.sing.nodes();
        nodes.insert(nodes.end(), extra.begin(), extra.end());
        std::sort(nodes.begin(), nodes.end());
    }
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (nodes[i + 1] - nodes[i] < 1e-14) continue;
        const double s = 0.5 * (nodes[i] + nodes[i + 1]);
        const RadialFunction u = sd.eval_local(s);
        const double drift = ode.h(s) * u.df, pot = ode.q(s) * u.f;
        const double defect = u.ddf + drift - pot;
        const double mag = std::abs(u.ddf) + std::abs(drift) + std::abs(pot) + 1e-300;
        worst = std::max(worst, std::abs(defect) / mag);
    }
    return worst;
}

std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> out(count);
    const double la = std::log(lo), lb = std::log(hi);
    for (int i = 0; i < count; ++i)
        out[i] = std::exp(la + (lb - la) * i / (count - 1));
    return out;
}

// Frozen-coefficient decay slope du/dxi at an open end, xi the outward
// distance. Exact for a conical end at the spectral bottom; Yukawa-corrected
// for q > 0; Robin from the frozen drift on negatively curved ends.
double open_end_slope(double k_sph_end, double q_end, double drift_out, double cone_rho,
                      int n) {
    if (k_sph_end < -1e-10) {
        const double disc = 0.25 * drift_out * drift_out + q_end;
        if (disc < 0.0)
            throw NoPositiveSolution(
                "open end: oscillatory far field (shift above the essential spectrum)");
        return -0.5 * drift_out - std::sqrt(disc);
    }
    if (std::abs(q_end) <= 1e-13) return (2.0 - n) / cone_rho;
    if (q_end > 0.0) return -std::sqrt(q_end) - (n - 1) / (2.0 * cone_rho);
    throw NoPositiveSolution(
        "open end: shift above the essential spectrum of the flat far field");
}

}  // namespace

GreenSolution green_solve(const ModelManifold& m) {
    if (m.basepoints.empty())
        throw DomainError("green_solve: model has no basepoints");
    if (m.warp.is_circle())
        throw DomainError("green_solve: circle domains have no pole basepoints");

    const int n = m.params.n;
    const double gamma = m.params.gamma;
    const double mu = m.params.lambda - 0.5 * m.params.epsilon;

    GreenSolution sol(m);
    sol.b_ = 1.0 / (gamma * (n - 2) * sphere_area(n));
    sol.meta_.mu = mu;
    sol.meta_.r_inner = kInner;

    if (m.closed()) {
        const SpectralResult sr = lambda1_radial(m, gamma, 4096);
        sol.meta_.lambda1 = sr.lambda1;
        sol.meta_.eigensolve_ran = true;
        const double slack = 1e-9 * std::max(1.0, std::abs(sr.lambda1));
        if (mu >= sr.lambda1 - slack) {
            std::ostringstream msg;
            msg << "green_solve: shift " << mu << " is not below lambda1 "
                << sr.lambda1 << "; no positive solution";
            throw NoPositiveSolution(msg.str());
        }
    }

    const auto& w = m.warp;
    const auto& iv = std::get<Interval>(w.domain());
    const double match = 0.5 * (w.r_min() + w.r_max());
    sol.match_ = match;
    sol.meta_.match_point = match;

    std::array<LocalOde, 2> odes;
    for (int k = 0; k < 2; ++k) {
        const int dir = (k == 0) ? +1 : -1;
        const double root = (k == 0) ? w.r_min() : w.r_max();
        const EndKind end = (k == 0) ? iv.left : iv.right;

        SideSpec spec;
        spec.dir = dir;
        spec.root = root;
        spec.span = dir * (match - root);
        spec.n = n;
        spec.pole = (end == EndKind::Pole);
        for (double bp : m.basepoints)
            if (std::abs(bp - root) < 1e-9) spec.singular = true;
        if (spec.singular) spec.b_eff = sol.b_;

        LocalOde ode;
        ode.h = [&w, n, dir, root](double s) {
            const double r = root + dir * s;
            return (n - 1) * dir * w.dphi(r) / w.phi(r);
        };
        ode.q = [&m, gamma, mu, dir, root](double s) {
            return (m.potential(root + dir * s) - mu) / gamma;
        };

        if (spec.pole) {
            spec.phi3 = w.cap_c3(root);
            spec.q0 = (m.potential(root) - mu) / gamma;
        } else {
            const double q_end = (m.potential(root) - mu) / gamma;
            const double k_end = curvature(w, n, root).k_sph;
            const double drift_out = (n - 1) * (-dir) * w.dphi(root) / w.phi(root);
            const double rho = w.phi(root) / std::abs(w.dphi(root));
            const double slope = open_end_slope(k_end, q_end, drift_out, rho, n);
            spec.end_u = 1.0;
            spec.end_v = -slope;  // inward derivative of the outward-decaying family
        }
        sol.side_[k] = build_side(spec, ode);
        odes[k] = ode;
    }

    const auto [al, ar] = match_sides(sol.side_[0], sol.side_[1]);
    sol.side_[0].coef = al;
    sol.side_[1].coef = ar;

    // positivity sweep and the two-sided bound constant near the basepoints
    double bound_c = 1.0;
    for (int k = 0; k < 2; ++k) {
        const GreenSide& sd = sol.side_[k];
        const double lo = sd.pole ? sd.s0 : sd.span * 1e-4;
        for (double s : log_grid(lo, sd.span, 400)) {
            const double val = sd.eval_local(s).f;
            if (!(val > 0.0)) {
                std::ostringstream msg;
                msg << "green_solve: solution vanishes at distance " << s
                    << " from the " << (k == 0 ? "left" : "right") << " end";
                throw NoPositiveSolution(msg.str());
            }
            if (sd.singular) {
                const double wv = val * std::pow(s, n - 2) / sol.b_;
                bound_c = std::max({bound_c, wv, 1.0 / wv});
            }
        }
    }
    sol.meta_.bound_constant = bound_c;
    sol.meta_.residual = std::max(side_residual(sol.side_[0], odes[0]),
                                  side_residual(sol.side_[1], odes[1]));

    for (int i = 0; i < sol.num_basepoints(); ++i) {
        const double bp = m.basepoints[i];
        const int k = std::abs(bp - w.r_min()) <= std::abs(bp - w.r_max()) ? 0 : 1;
        sol.side_of_basepoint_[i] = k;
        const GreenSide& sd = sol.side_[k];
        sol.meta_.matching_coefficient[i] = sd.coef;
        auto flux = [&](double rho) {
            const double phi = w.phi(sd.root + sd.dir * rho);
            return -gamma * sphere_area(n) * std::pow(phi, n - 1) *
                   sd.eval_local(rho).df;
        };
        const double rho = 1e-3;
        sol.meta_.mass[i] = (4.0 * flux(0.5 * rho) - flux(rho)) / 3.0;
    }
    return sol;
}

const detail::GreenSide& GreenSolution::side_at(double r) const {
    return (r <= match_) ? side_[0] : side_[1];
}

double GreenSolution::u(double r) const {
    const auto& sd = side_at(r);
    return sd.eval_local(sd.dir * (r - sd.root)).f;
}

double GreenSolution::du(double r) const {
    const auto& sd = side_at(r);
    return sd.dir * sd.eval_local(sd.dir * (r - sd.root)).df;
}

double GreenSolution::ddu(double r) const {
    const auto& sd = side_at(r);
    return sd.eval_local(sd.dir * (r - sd.root)).ddf;
}

RadialFunction GreenSolution::local(int basepoint, double s) const {
    if (basepoint < 0 || basepoint >= num_basepoints())
        throw DomainError("green: basepoint index out of range");
    const double chart = model_.chart_radius(model_.basepoints[basepoint]);
    if (!(s > 0.0) || s >= chart - 1e-12)
        throw DomainError("green: radius outside the polar chart of the basepoint");
    const GreenSide& sd = side_[side_of_basepoint_[basepoint]];
    if (s <= sd.span) return sd.eval_local(s);
    const double r = sd.root + sd.dir * s;
    RadialFunction out{u(r), sd.dir * du(r), ddu(r)};
    return out;
}

double GreenSolution::w(int basepoint, double s) const {
    return local(basepoint, s).f * std::pow(s, model_.params.n - 2) / b_;
}

double GreenSolution::dw(int basepoint, double s) const {
    const RadialFunction lf = local(basepoint, s);
    const int n = model_.params.n;
    return (lf.df * std::pow(s, n - 2) + (n - 2) * std::pow(s, n - 3) * lf.f) / b_;
}

double GreenSolution::ddw(int basepoint, double s) const {
    const RadialFunction lf = local(basepoint, s);
    const int n = model_.params.n;
    return (lf.ddf * std::pow(s, n - 2) + 2.0 * (n - 2) * std::pow(s, n - 3) * lf.df +
            (n - 2) * (n - 3) * std::pow(s, n - 4) * lf.f) / b_;
}

WSample extract_w(const GreenSolution& sol, int basepoint,
                  const std::vector<double>& radii) {
    WSample out;
    out.s = radii;
    out.w.reserve(radii.size());
    out.dw.reserve(radii.size());
    out.ddw.reserve(radii.size());
    for (double s : radii) {
        out.w.push_back(sol.w(basepoint, s));
        out.dw.push_back(sol.dw(basepoint, s));
        out.ddw.push_back(sol.ddw(basepoint, s));
    }
    return out;
}

std::array<RateReport, 3> green_asymptotics_check(const GreenSolution& sol) {
    std::array<RateReport, 3> out;
    const char* names[3] = {"|w-1|", "|dw|", "|ddw|"};
    for (int i = 0; i < sol.num_basepoints(); ++i) {
        const double span =
            sol.model().chart_radius(sol.model().basepoints[i]);
        const double s_hi = std::min(0.2 * span, 0.2);
        std::vector<double> radii;
        for (double s = s_hi; s >= std::max(2.4e-5, 2.0 * sol.meta().r_inner);
             s *= 0.5)
            radii.push_back(s);
        const WSample ws = extract_w(sol, i, radii);
        for (int k = 0; k < 3; ++k) {
            std::vector<RateSample> samples(radii.size());
            for (std::size_t j = 0; j < radii.size(); ++j) {
                const double q = (k == 0)   ? std::abs(ws.w[j] - 1.0)
                                 : (k == 1) ? std::abs(ws.dw[j])
                                            : std::abs(ws.ddw[j]);
                samples[j] = {radii[j], q};
            }
            RateReport rep = rate_check(samples, k, names[k]);
            if (i == 0 || rep.margin < out[k].margin) out[k] = std::move(rep);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Space-form model profile.

struct ModelGreenResult::State {
    std::array<GreenSide, 2> side;
    double match = 0.0;

    RadialFunction eval(double r) const {
        const GreenSide& sd = (r <= match) ? side[0] : side[1];
        return sd.eval_local(sd.dir * (r - sd.root));
    }
};

double ModelGreenResult::eval(double radius) const {
    return state_->eval(radius).f;
}

double ModelGreenResult::deriv(double radius) const {
    const GreenSide& sd = (radius <= state_->match) ? state_->side[0] : state_->side[1];
    return sd.dir * sd.eval_local(sd.dir * (radius - sd.root)).df;
}

ModelGreenResult model_green(double K, double F, double a, double R, int n) {
    if (n < 3) throw DomainError("model_green: dimension must be at least 3");
    if (!(a > 0.0)) throw DomainError("model_green: delta mass must be positive");
    if (!(R > 0.0)) throw DomainError("model_green: radius must be positive");

    ModelGreenResult out;
    out.K = K;
    out.F = F;
    out.a = a;
    out.R = R;
    out.n = n;
    out.b = a / ((n - 2) * sphere_area(n));

    const double sk = std::sqrt(std::abs(K));
    auto drift = [K, sk, n](double r) {
        if (K > 0.0) return (n - 1) * sk * std::cos(sk * r) / std::sin(sk * r);
        if (K < 0.0) return (n - 1) * sk * std::cosh(sk * r) / std::sinh(sk * r);
        return (n - 1) / r;
    };
    const double phi3 = -K / 6.0;

    double far_root, match;
    SideSpec far;
    far.dir = -1;
    far.n = n;
    if (K > 0.0) {
        const double L = M_PI / sk;
        if (R >= L - 1e-12)
            throw RadiusTooLarge("model_green: radius reaches the conjugate point");
        far_root = L;
        match = 0.5 * L;
        far.pole = true;
        far.phi3 = phi3;
        far.q0 = F;
    } else {
        far_root = (K < 0.0) ? std::max(2.0 * R, R + 8.0 / sk) : 2.0 * R;
        match = R;
        const double q_end = F;
        double slope;
        bool dirichlet = false;
        if (K < 0.0) {
            const double h_out = drift(far_root);
            const double disc = 0.25 * h_out * h_out + q_end;
            if (disc >= 0.0) {
                slope = -0.5 * h_out - std::sqrt(disc);
            } else {
                dirichlet = true;
                slope = 0.0;
            }
        } else if (std::abs(q_end) <= 1e-13) {
            slope = (2.0 - n) / far_root;
        } else if (q_end > 0.0) {
            slope = -std::sqrt(q_end) - (n - 1) / (2.0 * far_root);
        } else {
            dirichlet = true;
            slope = 0.0;
        }
        if (dirichlet) {
            far.end_u = 0.0;
            far.end_v = 1.0;  // inward ramp; admissible sign fixed by matching
        } else {
            far.end_u = 1.0;
            far.end_v = -slope;
        }
    }
    far.root = far_root;
    far.span = far_root - match;

    SideSpec sing;
    sing.dir = +1;
    sing.root = 0.0;
    sing.span = match;
    sing.pole = true;
    sing.singular = true;
    sing.b_eff = out.b;
    sing.phi3 = phi3;
    sing.q0 = F;
    sing.n = n;

    auto make_ode = [&](int dir, double root) {
        LocalOde ode;
        ode.h = [drift, dir, root](double s) { return dir * drift(root + dir * s); };
        ode.q = [F](double) { return F; };
        return ode;
    };
    const LocalOde ode0 = make_ode(+1, 0.0);
    const LocalOde ode1 = make_ode(-1, far_root);

    auto state = std::make_shared<ModelGreenResult::State>();
    state->match = match;
    state->side[0] = build_side(sing, ode0);
    state->side[1] = build_side(far, ode1);
    const auto [al, ar] = match_sides(state->side[0], state->side[1]);
    state->side[0].coef = al;
    state->side[1].coef = ar;
    out.state_ = state;

    out.residual = std::max(side_residual(state->side[0], ode0),
                            side_residual(state->side[1], ode1));

    // positive and strictly decreasing on (0, R], else the radius is too big
    out.r = log_grid(std::max(2.0 * kInner, 1e-4), R, 256);
    out.G.reserve(out.r.size());
    out.dG.reserve(out.r.size());
    for (double r : out.r) {
        const double g = out.eval(r), dg = out.deriv(r);
        if (!(g > 0.0))
            throw RadiusTooLarge("model_green: profile loses positivity inside R");
        if (dg * r / g > 1e-10)
            throw RadiusTooLarge("model_green: profile stops decreasing inside R");
        out.G.push_back(g);
        out.dG.push_back(dg);
    }

    const double s_hi = std::min(0.2 * match, 0.2);
    std::vector<RateSample> samples;
    for (double s = s_hi; s >= std::max(2.4e-5, 2.0 * kInner); s *= 0.5)
        samples.push_back(
            {s, std::abs(out.eval(s) * std::pow(s, n - 2) / out.b - 1.0)});
    out.asymptote = rate_check(samples, 0, "|Gbar r^{n-2}/b - 1|");
    return out;
}

}  // namespace spectun
