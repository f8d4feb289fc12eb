#pragma once

#include <array>
#include <vector>

#include "spectun/rates.hpp"
#include "spectun/warp.hpp"

namespace spectun {

/// Surface area of the unit sphere S^{n-1} in R^n.
double sphere_area(int n);

/// Ric(d/dr, d/dr) = -(n-1) phi''/phi, straight from the warp derivatives.
/// Interior points only (SingularityError at a pole); the pole-safe path is
/// curvature() below.
double ricci_radial(const WarpProfile& w, int n, double r);

/// Ric(e, e) = -phi''/phi + (n-2)(1 - phi'^2)/phi^2 for a unit spherical
/// direction e; same domain restrictions as ricci_radial.
double ricci_tangential(const WarpProfile& w, int n, double r);

/// Pointwise curvature data of dr^2 + phi^2 g_{S^{n-1}} at radius r.
/// ric_min is the smallest eigenvalue of the Ricci endomorphism, which for a
/// warped product is min(ric_rr, ric_ee); ric_mixed is the radial/spherical
/// off-diagonal entry and vanishes identically for these metrics.
struct CurvatureSample {
    double r = 0.0;
    double k_rad = 0.0;    ///< sectional curvature of planes containing d/dr
    double k_sph = 0.0;    ///< sectional curvature of spherical planes
    double ric_rr = 0.0;   ///< Ric(d/dr, d/dr)
    double ric_ee = 0.0;   ///< Ric(e, e) for a unit spherical direction e
    double ric_mixed = 0.0;
    double ric_min = 0.0;
};

/// Curvature of the warped metric at r. Near a pole (distance below 1e-3) the
/// spherical sectional curvature (1 - phi'^2)/phi^2 loses all precision to
/// cancellation, so it is replaced by its cap expansion -6 c3 + O(s^2); at the
/// pole itself both sectionals equal -6 c3 and the Ricci tensor is isotropic.
CurvatureSample curvature(const WarpProfile& w, int n, double r);

std::vector<CurvatureSample> curvature_table(const WarpProfile& w, int n,
                                             const std::vector<double>& r);

/// A radial function with two derivatives, as needed by the Laplacian.
struct RadialFunction {
    double f = 0.0;
    double df = 0.0;
    double ddf = 0.0;
};

/// Laplace-Beltrami operator on radial functions: u'' + (n-1)(phi'/phi) u'.
/// At a pole (within 1e-12 of a cap) the drift term is singular; with
/// pole_limit the smooth limit n u'' is returned instead (valid whenever
/// u' -> 0 there, which holds for smooth radial functions), otherwise the
/// call throws SingularityError.
double laplacian_radial(const WarpProfile& w, int n, double r, const RadialFunction& u,
                        bool pole_limit = false);

/// Fiber ratio a(s) = (phi(s)/s)^2 measured from the given pole, together
/// with its first two derivatives in the pole distance s. Continuous at s = 0
/// with a(0) = 1, a'(0) = 0, a''(0) = 4 c3.
struct FiberFactor {
    double a = 1.0;
    double da = 0.0;
    double dda = 0.0;
};

FiberFactor fiber_factor(const WarpProfile& w, double pole, double s);

/// Decay of the fiber ratio toward the pole at dyadic distances s_hi * 2^-j:
/// |a - 1| = o(1), |a'| = o(s^-1), |a''| = o(s^-2). All three pass for smooth
/// caps, where the deviations are O(s^2), O(s), O(1).
std::array<RateReport, 3> fiber_rates(const WarpProfile& w, double pole,
                                      double s_hi = 0.25, int levels = 9);

}  // namespace spectun
