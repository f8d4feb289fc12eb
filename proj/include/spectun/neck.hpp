#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spectun/interp.hpp"
#include "spectun/rates.hpp"

namespace spectun {

/// Per-constraint outcome of a profile validation. `worst` is the extremal
/// value of the constraint functional (min for lower bounds, max deviation
/// for equalities) and `location` is where it was attained. Constraints a
/// sampled representation cannot evaluate are reported with checked = false
/// and do not count against ok().
struct ConstraintReport {
    struct Entry {
        std::string constraint;
        bool checked = true;
        bool passed = false;
        double worst = 0.0;
        double location = 0.0;
    };
    std::vector<Entry> entries;

    bool ok() const;
    std::string summary() const;
};

/// Even convex profile equal to |x| for |x| >= 1 and flattened to a positive
/// minimum at the origin. All bending is carried by a bump-function second
/// derivative supported in (-1, 1), so the profile matches the cone to
/// infinite order at |x| = 1 and every derivative is globally continuous.
class NeckProfile {
  public:
    /// The reference profile: f'' = c exp(-1/(1-x^2)) on (-1,1) with c chosen
    /// so that f'(1) = 1. Values come from per-cell Gauss panels accumulated
    /// over [0, 1]; accurate to a few ulps.
    static NeckProfile canonical();
    /// Monotone-cubic fit of a sampled profile on [0, x_max] (even extension
    /// implied). Finite-order data: third derivatives are refused and the
    /// infinite-order constraints are reported as unchecked.
    static NeckProfile from_samples(std::vector<double> x, std::vector<double> f);

    double f(double x) const;
    double df(double x) const;
    double ddf(double x) const;
    double dddf(double x) const;
    /// f(x) - |x| >= 0, computed without cancellation for the canonical
    /// profile (as c * int (s-|x|) f''-bump over [|x|,1]), so it stays
    /// meaningful down to the 1e-300 range near the junction.
    double cone_gap(double x) const;

    double f0() const { return f0_; }
    /// Normalisation constant of the bump second derivative (canonical only).
    double bump_constant() const;
    bool is_sampled() const { return sampled_.has_value(); }

    /// Pointwise slack in the bending-dominates-deviation inequality
    ///   f''/f >= |x f'/f - 1|/2 + |x/f - 1|/2
    /// which holds on [1/2, 1] with equality only at x = 1.
    double margin(double x) const;

    /// Evenness, positivity, convexity, |f'| < 1 inside, f''' < 0 on (0,1),
    /// f = |x| outside [-1,1], f >= |x|, a strict bending floor on
    /// [-2/3, 2/3], and the infinite-order junction rate.
    ConstraintReport validate(int grid = 4096) const;

    /// Minimum of margin() over [1/2, 1] as a report entry (passes at -1e-12;
    /// the minimum sits at x = 1 where the inequality is an equality).
    ConstraintReport::Entry bending_margin(int grid = 4096) const;

    /// Decay of f - |x| approaching the junction: claims o(t^4) in t = 1-|x|,
    /// which the canonical profile beats by every polynomial order.
    RateReport flatness_rate() const;

  private:
    NeckProfile() = default;

    // cumulative tables over [0, 1] for the canonical profile
    std::vector<double> grid_, cum_bump_, cum_xbump_;
    double c_ = 0.0;
    double f0_ = 0.0;
    std::optional<Pchip> sampled_;
    double sample_h_ = 0.0;  ///< min node spacing of a sampled table
};

/// C^infinity step: 0 for t <= 0, 1 for t >= 1, strictly increasing between;
/// built from exp(-1/t) so it is symmetric about t = 1/2.
double smooth_step(double t);
double smooth_step_d(double t);
double smooth_step_dd(double t);

/// Even cutoff eta(x) = smooth_step(3|x| - 1): vanishes for |x| <= 1/3,
/// equals 1 for |x| >= 2/3, and eta(1/2) = 1/2 exactly.
double cutoff(double x);
double cutoff_d(double x);
double cutoff_dd(double x);

}  // namespace spectun
