#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "spectun/model.hpp"
#include "spectun/ode.hpp"
#include "spectun/rates.hpp"

namespace spectun {

namespace detail {

/// One half of a two-sided singular solve, in the local coordinate
/// s = dir (r - root) measured from its domain end. The solution on the side
/// is u(s) = b_eff S(s) + coef F(s) where S is the singular Frobenius family
/// (basepoint ends only) and F is the regular / decaying family; both are
/// series below s0 at pole ends and propagated trajectories beyond.
struct GreenSide {
    int dir = +1;
    double root = 0.0;
    double span = 0.0;
    bool pole = false;
    bool singular = false;
    double b_eff = 0.0;
    double coef = 0.0;
    double c2 = 0.0, kappa = 0.0, r2 = 0.0;  // Frobenius coefficients
    double s0 = 0.0;
    int n = 0;
    double end_u = 1.0, end_v = 0.0;  // open-end start data (s = 0)
    RadialSolution sing, reg;
    bool has_sing = false;

    RadialFunction series(double s) const;  // pole ends, s < s0
    RadialFunction eval_local(double s) const;
};

}  // namespace detail

/// Solver metadata attached to a GreenSolution.
struct GreenMeta {
    double mu = 0.0;            ///< lambda - epsilon/2
    double r_inner = 1e-5;      ///< series-to-integrator handoff distance
    double match_point = 0.0;   ///< radius where the one-sided families were glued
    double residual = 0.0;      ///< sup of the normalized ODE defect between nodes
    double bound_constant = 1.0;  ///< C with 1/C <= u/(b s^{2-n}) <= C near basepoints
    double lambda1 = 0.0;       ///< from the precondition eigensolve (closed models)
    bool eigensolve_ran = false;
    std::array<double, 2> mass{0.0, 0.0};  ///< Richardson-extrapolated delta mass
    std::array<double, 2> matching_coefficient{0.0, 0.0};  ///< regular admixture A_i
};

/// Positive radial solution of
///     -gamma (u'' + (n-1)(phi'/phi) u') + V u = (lambda - epsilon/2) u
/// away from the basepoints, with a unit delta source at each: at pole
/// distance s from a basepoint u = b s^{2-n} (1 + o(1)) where
/// b = 1/(gamma (n-2) |S^{n-1}|). Built by green_solve; immutable.
class GreenSolution {
  public:
    double u(double r) const;
    double du(double r) const;
    double ddu(double r) const;

    /// Normalized profile near basepoint i as a function of pole distance s:
    /// w = u s^{n-2} / b, together with its s-derivatives. Requires
    /// 0 < s < chart radius of that basepoint.
    double w(int basepoint, double s) const;
    double dw(int basepoint, double s) const;
    double ddw(int basepoint, double s) const;

    double b() const { return b_; }
    int num_basepoints() const { return static_cast<int>(model_.basepoints.size()); }
    const ModelManifold& model() const { return model_; }
    const GreenMeta& meta() const { return meta_; }

  private:
    friend GreenSolution green_solve(const ModelManifold& m);
    explicit GreenSolution(ModelManifold m) : model_(std::move(m)) {}

    const detail::GreenSide& side_at(double r) const;
    RadialFunction local(int basepoint, double s) const;  // derivatives in s

    ModelManifold model_;
    double b_ = 0.0;
    double match_ = 0.0;
    std::array<detail::GreenSide, 2> side_;
    std::array<int, 2> side_of_basepoint_{0, 1};
    GreenMeta meta_;
};

/// Solve the delta-source problem on a model with one or two basepoints.
/// Closed models are checked against the spectral precondition
/// mu < lambda1 first; open ends get the frozen-coefficient decay condition.
/// Throws NoPositiveSolution when either fails or the assembled solution is
/// not positive, SolverDiverged when the matching system degenerates.
GreenSolution green_solve(const ModelManifold& m);

/// w, dw/ds, d2w/ds2 sampled at the given pole distances from a basepoint.
struct WSample {
    std::vector<double> s, w, dw, ddw;
};

WSample extract_w(const GreenSolution& sol, int basepoint,
                  const std::vector<double>& radii);

/// Statement-level decay of the normalized profile at the basepoints:
/// |w - 1| = o(1), |dw| = o(1/s), |ddw| = o(1/s^2) as s -> 0, each verified
/// by rate_check on dyadic radii. With two basepoints each report carries the
/// smaller of the two margins.
std::array<RateReport, 3> green_asymptotics_check(const GreenSolution& sol);

/// Radial Green profile of -Lap + F on the simply connected space form of
/// curvature K, with delta mass a at the origin: Gbar'' + H_K Gbar' = F Gbar,
/// Gbar ~ b r^{2-n}, b = a/((n-2)|S^{n-1}|). Positive and decreasing on
/// (0, R], otherwise model_green throws RadiusTooLarge.
struct ModelGreenResult {
    double K = 0.0, F = 0.0, a = 0.0, R = 0.0;
    int n = 0;
    double b = 0.0;
    std::vector<double> r;  ///< diagnostic samples in (0, R]
    std::vector<double> G, dG;
    RateReport asymptote;   ///< Gbar r^{n-2} (n-2)|S^{n-1}|/a - 1 = o(1)
    double residual = 0.0;

    double eval(double radius) const;
    double deriv(double radius) const;

  private:
    friend ModelGreenResult model_green(double K, double F, double a, double R, int n);
    struct State;
    std::shared_ptr<const State> state_;
};

ModelGreenResult model_green(double K, double F, double a, double R, int n);

}  // namespace spectun
