#include "spectun/geometry.hpp"

#include <cmath>
#include <numbers>

#include "spectun/errors.hpp"

namespace spectun {
namespace {

// Below this pole distance the direct K_sph = (1 - phi'^2)/phi^2 formula has
// lost more than half its digits to cancellation; the cap expansion is exact
// for space-form caps and O(s^2) otherwise.
constexpr double kCapSwitch = 1e-3;
constexpr double kAtPole = 1e-12;

double nearest_pole(const WarpProfile& w, double r) {
    const auto ps = w.poles();
    if (ps.empty()) throw DomainError("nearest_pole: profile has no pole");
    double best = ps.front();
    for (double p : ps)
        if (std::abs(r - p) < std::abs(r - best)) best = p;
    return best;
}

}  // namespace

double sphere_area(int n) {
    if (n < 2) throw DomainError("sphere_area: need n >= 2");
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

// Both scalar entries compose the sectional curvatures in exactly the order
// curvature() uses, so the two routes agree bitwise away from poles.
double ricci_radial(const WarpProfile& w, int n, double r) {
    if (w.distance_to_pole(r) < kAtPole)
        throw SingularityError("ricci_radial: pole evaluation; use curvature()");
    return (n - 1) * (-w.ddphi(r) / w.phi(r));
}

double ricci_tangential(const WarpProfile& w, int n, double r) {
    if (w.distance_to_pole(r) < kAtPole)
        throw SingularityError("ricci_tangential: pole evaluation; use curvature()");
    const double phi = w.phi(r), dphi = w.dphi(r);
    const double k_rad = -w.ddphi(r) / phi;
    const double k_sph = (1.0 - dphi * dphi) / (phi * phi);
    return k_rad + (n - 2) * k_sph;
}

CurvatureSample curvature(const WarpProfile& w, int n, double r) {
    if (n < 2) throw DomainError("curvature: need n >= 2");
    CurvatureSample c;
    c.r = r;
    const double s = w.distance_to_pole(r);
    if (s < kAtPole) {
        const double c3 = w.cap_c3(nearest_pole(w, r));
        c.k_rad = -6.0 * c3;
        c.k_sph = -6.0 * c3;
    } else {
        const double phi = w.phi(r), dphi = w.dphi(r);
        c.k_rad = -w.ddphi(r) / phi;
        c.k_sph = (s < kCapSwitch) ? -6.0 * w.cap_c3(nearest_pole(w, r))
                                   : (1.0 - dphi * dphi) / (phi * phi);
    }
    c.ric_rr = (n - 1) * c.k_rad;
    c.ric_ee = c.k_rad + (n - 2) * c.k_sph;
    c.ric_mixed = 0.0;
    c.ric_min = std::min(c.ric_rr, c.ric_ee);
    return c;
}

std::vector<CurvatureSample> curvature_table(const WarpProfile& w, int n,
                                             const std::vector<double>& r) {
    std::vector<CurvatureSample> out;
    out.reserve(r.size());
    for (double x : r) out.push_back(curvature(w, n, x));
    return out;
}

double laplacian_radial(const WarpProfile& w, int n, double r, const RadialFunction& u,
                        bool pole_limit) {
    if (w.distance_to_pole(r) < kAtPole) {
        if (!pole_limit)
            throw SingularityError("laplacian_radial: pole evaluation without limit");
        return n * u.ddf;
    }
    return u.ddf + (n - 1) * (w.dphi(r) / w.phi(r)) * u.df;
}

FiberFactor fiber_factor(const WarpProfile& w, double pole, double s) {
    if (!(s > 0)) throw DomainError("fiber_factor: pole distance must be positive");
    FiberFactor out;
    if (s < kCapSwitch) {
        const double c3 = w.cap_c3(pole);
        const double rho = 1.0 + c3 * s * s;
        out.a = rho * rho;
        out.da = 4.0 * c3 * s * rho;
        out.dda = 4.0 * c3 * (1.0 + 3.0 * c3 * s * s);
        return out;
    }
    const double sign = (std::abs(pole - w.r_min()) < std::abs(pole - w.r_max())) ? 1.0 : -1.0;
    const double x = pole + sign * s;
    const double phi = w.phi(x);
    const double dphi = sign * w.dphi(x);
    const double ddphi = w.ddphi(x);
    const double rho = phi / s;
    const double drho = (dphi * s - phi) / (s * s);
    const double ddrho = ddphi / s - 2.0 * (dphi * s - phi) / (s * s * s);
    out.a = rho * rho;
    out.da = 2.0 * rho * drho;
    out.dda = 2.0 * (drho * drho + rho * ddrho);
    return out;
}

std::array<RateReport, 3> fiber_rates(const WarpProfile& w, double pole, double s_hi,
                                      int levels) {
    std::vector<RateSample> q0, q1, q2;
    for (int j = 0; j < levels; ++j) {
        const double s = s_hi * std::ldexp(1.0, -j);
        const FiberFactor ff = fiber_factor(w, pole, s);
        q0.push_back({s, std::abs(ff.a - 1.0)});
        q1.push_back({s, std::abs(ff.da)});
        q2.push_back({s, std::abs(ff.dda)});
    }
    return {rate_check(q0, 0, "|a - 1|"), rate_check(q1, 1, "|a'|"),
            rate_check(q2, 2, "|a''|")};
}

}  // namespace spectun
