#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spectun/interp.hpp"

namespace spectun {

enum class EndKind { Pole, Boundary };

/// Radial domain [r_min, r_max] with a cap or a cut at each end.
struct Interval {
    double r_min = 0.0;
    double r_max = 1.0;
    EndKind left = EndKind::Pole;
    EndKind right = EndKind::Boundary;
};

/// Periodic radial domain of the given circumference.
struct Circle {
    double length = 1.0;
};

using WarpDomain = std::variant<Interval, Circle>;

/// Rotationally symmetric metric dr^2 + phi(r)^2 g_{S^{n-1}} described by its
/// warp function. Derivative callables are optional; when missing they are
/// replaced by centered fourth-order differences with step max(1e-5, |r|*1e-7).
class WarpProfile {
  public:
    using Fn = std::function<double(double)>;

    static WarpProfile from_callables(WarpDomain domain, std::string name, Fn phi,
                                      Fn dphi = {}, Fn ddphi = {}, Fn dddphi = {});
    /// phi = r on [0, r_max]: flat cap, open outer end.
    static WarpProfile euclidean(double r_max);
    /// Constant curvature K > 0: phi = sin(sqrt(K) r)/sqrt(K) on [0, pi/sqrt(K)].
    static WarpProfile sphere(double curvature = 1.0);
    /// Constant curvature K < 0 cap: phi = sinh(sqrt(-K) r)/sqrt(-K) on [0, r_max].
    static WarpProfile hyperbolic_cap(double r_max, double curvature = -1.0);
    /// Dispatches on the sign of K (K = 0 -> euclidean).
    static WarpProfile space_form(double curvature, double r_max);
    /// phi == 1 on a circle: the product metric on S^{n-1} x S^1.
    static WarpProfile cylinder(double length);
    /// phi = 1 + amplitude * cos(2 pi r / length) on a circle.
    static WarpProfile warped_circle(double length, double amplitude);
    /// Monotone-cubic interpolant of a sampled table (finite-order data only).
    static WarpProfile from_samples(WarpDomain domain, std::string name,
                                    std::vector<double> r, std::vector<double> phi);

    double phi(double r) const;
    double dphi(double r) const;
    double ddphi(double r) const;
    double dddphi(double r) const;

    const WarpDomain& domain() const { return domain_; }
    const std::string& name() const { return name_; }
    bool is_circle() const { return std::holds_alternative<Circle>(domain_); }
    /// True for domains without open ends (circle, or poles at both ends).
    bool closed() const;
    double r_min() const;
    double r_max() const;
    double length() const { return r_max() - r_min(); }
    /// Coordinates of pole caps (empty for circles).
    std::vector<double> poles() const;
    /// Distance from r to the nearest pole (+inf if there is none).
    double distance_to_pole(double r) const;
    /// Map into the fundamental domain (identity for intervals).
    double wrap(double r) const;
    bool has_analytic_derivatives() const { return bool(dddphi_); }
    bool is_sampled() const { return sampled_.has_value(); }

    /// Cubic cap coefficient c3 in phi = s + c3 s^3 + O(s^5) at the given pole,
    /// taken from phi''' when available, otherwise Richardson-extrapolated.
    double cap_c3(double pole) const;

    struct Check {
        bool ok = true;
        std::string detail;
    };
    /// Numerical sanity of the profile: positivity in the interior, cap
    /// conditions phi = 0, |phi'| = 1 at poles, periodic closure on circles.
    Check validate(int grid = 2048) const;

  private:
    WarpProfile() = default;
    void ensure_inside(double& r) const;

    WarpDomain domain_;
    std::string name_;
    Fn phi_, dphi_, ddphi_, dddphi_;
    std::optional<Pchip> sampled_;
};

}  // namespace spectun
