#pragma once

#include <functional>
#include <vector>

namespace spectun {

/// Right side of a scalar second-order ODE: returns u'' given (t, u, u').
using SecondOrderRhs = std::function<double(double t, double u, double v)>;

struct OdeOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    /// Step cap. Keeps the dense-output defect well below the residual budget
    /// even where the error estimator would allow long strides.
    double h_max = 1e-2;
    double h_init = 0.0;   ///< 0 -> choose automatically
    bool fixed_step = false;
    double fixed_h = 0.0;  ///< used when fixed_step is set (sign ignored)
    std::size_t max_steps = 20'000'000;
};

/// Dense trajectory of one integration.
///
/// Stores (t, u, u', u'') at the accepted nodes and evaluates between them
/// with the quintic Hermite matching all six boundary values. du/ddu are the
/// exact derivatives of that quintic, so |ddu + H*du - rhs| measured between
/// nodes is the honest defect of the continuous numerical solution.
class RadialSolution {
  public:
    double u(double t) const;
    double du(double t) const;
    double ddu(double t) const;

    double t_min() const { return t_.front(); }
    double t_max() const { return t_.back(); }
    std::size_t steps() const { return t_.size() - 1; }

    const std::vector<double>& nodes() const { return t_; }

  private:
    friend RadialSolution integrate_second_order(const SecondOrderRhs&, double, double,
                                                 double, double, const OdeOptions&);
    struct Coef {
        double c0, c1, c2, c3, c4, c5, h;  // scaled monomial coefficients on [0,1]
    };
    Coef coef(int i) const;
    int locate(double t) const;

    std::vector<double> t_, u_, v_, a_;
    bool forward_ = true;
};

/// Integrate u'' = rhs(t, u, u') from (t0, u0, v0) to t1 (either direction).
/// Adaptive Dormand-Prince 5(4) with PI step control; throws SolverDiverged
/// if the step size underflows or the step budget is exhausted.
RadialSolution integrate_second_order(const SecondOrderRhs& rhs, double t0, double u0,
                                      double v0, double t1,
                                      const OdeOptions& opts = {});

}  // namespace spectun
