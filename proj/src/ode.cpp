#include "spectun/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spectun/errors.hpp"

namespace spectun {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

struct State {
    double u, v;
};

}  // namespace

RadialSolution::Coef RadialSolution::coef(int i) const {
    // Quintic with p(0),p'(0),p''(0) and p(1),p'(1),p''(1) prescribed,
    // written in the step-local variable theta = (t - t_i) / h.
    const double h = t_[i + 1] - t_[i];
    const double b1v = u_[i + 1] - u_[i] - v_[i] * h - 0.5 * a_[i] * h * h;
    const double b2v = v_[i + 1] * h - v_[i] * h - a_[i] * h * h;
    const double b3v = (a_[i + 1] - a_[i]) * h * h;
    return {u_[i],
            v_[i] * h,
            0.5 * a_[i] * h * h,
            (20 * b1v - 8 * b2v + b3v) / 2,
            (-30 * b1v + 14 * b2v - 2 * b3v) / 2,
            (12 * b1v - 6 * b2v + b3v) / 2,
            h};
}

int RadialSolution::locate(double t) const {
    const double lo = t_.front(), hi = t_.back();
    const double slack = 1e-9 * (std::abs(lo) + std::abs(hi) + 1.0);
    if (t < lo - slack || t > hi + slack)
        throw DomainError("RadialSolution: query " + std::to_string(t) +
                          " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    int i = int(it - t_.begin()) - 1;
    return std::clamp(i, 0, int(t_.size()) - 2);
}

double RadialSolution::u(double t) const {
    const int i = locate(t);
    const Coef c = coef(i);
    const double s = (t - t_[i]) / c.h;
    return c.c0 + s * (c.c1 + s * (c.c2 + s * (c.c3 + s * (c.c4 + s * c.c5))));
}

double RadialSolution::du(double t) const {
    const int i = locate(t);
    const Coef c = coef(i);
    const double s = (t - t_[i]) / c.h;
    return (c.c1 + s * (2 * c.c2 + s * (3 * c.c3 + s * (4 * c.c4 + s * 5 * c.c5)))) / c.h;
}

double RadialSolution::ddu(double t) const {
    const int i = locate(t);
    const Coef c = coef(i);
    const double s = (t - t_[i]) / c.h;
    return (2 * c.c2 + s * (6 * c.c3 + s * (12 * c.c4 + s * 20 * c.c5))) / (c.h * c.h);
}

RadialSolution integrate_second_order(const SecondOrderRhs& rhs, double t0, double u0,
                                      double v0, double t1, const OdeOptions& opts) {
    if (t0 == t1) throw DomainError("integrate_second_order: empty span");
    const double dir = (t1 > t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);

    RadialSolution sol;
    sol.forward_ = dir > 0;
    auto push = [&](double t, const State& y, double a) {
        sol.t_.push_back(t);
        sol.u_.push_back(y.u);
        sol.v_.push_back(y.v);
        sol.a_.push_back(a);
    };

    State y{u0, v0};
    double t = t0;
    double k1v = rhs(t, y.u, y.v);
    push(t, y, k1v);

    double h;
    if (opts.fixed_step) {
        if (!(opts.fixed_h > 0)) throw DomainError("integrate_second_order: fixed_h must be > 0");
        h = dir * opts.fixed_h;
    } else {
        h = opts.h_init > 0 ? dir * opts.h_init
                            : dir * std::min(opts.h_max, 1e-4 * span + 1e-10);
    }

    double err_prev = 1.0;
    std::size_t nsteps = 0;
    while (dir * (t1 - t) > 0) {
        if (++nsteps > opts.max_steps)
            throw SolverDiverged("integrate_second_order: step budget exhausted at t=" +
                                 std::to_string(t));
        if (std::abs(h) > opts.h_max) h = dir * opts.h_max;
        if (dir * (t + h - t1) > 0) h = t1 - t;
        if (std::abs(h) < 1e-14 * (std::abs(t) + 1.0))
            throw SolverDiverged("integrate_second_order: step underflow at t=" +
                                 std::to_string(t));

        // Stage derivatives; u' is advanced alongside u so each k has (du, dv).
        const double k1u = y.v;
        double yu, yv;

        yu = y.u + h * a21 * k1u;
        yv = y.v + h * a21 * k1v;
        const double k2u = yv, k2v = rhs(t + c2 * h, yu, yv);

        yu = y.u + h * (a31 * k1u + a32 * k2u);
        yv = y.v + h * (a31 * k1v + a32 * k2v);
        const double k3u = yv, k3v = rhs(t + c3 * h, yu, yv);

        yu = y.u + h * (a41 * k1u + a42 * k2u + a43 * k3u);
        yv = y.v + h * (a41 * k1v + a42 * k2v + a43 * k3v);
        const double k4u = yv, k4v = rhs(t + c4 * h, yu, yv);

        yu = y.u + h * (a51 * k1u + a52 * k2u + a53 * k3u + a54 * k4u);
        yv = y.v + h * (a51 * k1v + a52 * k2v + a53 * k3v + a54 * k4v);
        const double k5u = yv, k5v = rhs(t + c5 * h, yu, yv);

        yu = y.u + h * (a61 * k1u + a62 * k2u + a63 * k3u + a64 * k4u + a65 * k5u);
        yv = y.v + h * (a61 * k1v + a62 * k2v + a63 * k3v + a64 * k4v + a65 * k5v);
        const double k6u = yv, k6v = rhs(t + h, yu, yv);

        const double u5 = y.u + h * (b1 * k1u + b3 * k3u + b4 * k4u + b5 * k5u + b6 * k6u);
        const double v5 = y.v + h * (b1 * k1v + b3 * k3v + b4 * k4v + b5 * k5v + b6 * k6v);
        const double k7u = v5, k7v = rhs(t + h, u5, v5);  // FSAL

        const double eu =
            h * (e1 * k1u + e3 * k3u + e4 * k4u + e5 * k5u + e6 * k6u + e7 * k7u);
        const double ev =
            h * (e1 * k1v + e3 * k3v + e4 * k4v + e5 * k5v + e6 * k6v + e7 * k7v);
        const double su = opts.abs_tol + opts.rel_tol * std::max(std::abs(y.u), std::abs(u5));
        const double sv = opts.abs_tol + opts.rel_tol * std::max(std::abs(y.v), std::abs(v5));
        const double err =
            std::sqrt(0.5 * ((eu / su) * (eu / su) + (ev / sv) * (ev / sv)));

        if (opts.fixed_step || err <= 1.0) {
            t += h;
            y = {u5, v5};
            k1v = k7v;
            push(t, y, k1v);
            if (!opts.fixed_step) {
                const double fac =
                    0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
                    std::pow(std::max(err_prev, 1e-10), 0.4 / 5.0);
                h *= std::clamp(fac, 0.2, 5.0);
                err_prev = std::max(err, 1e-10);
            }
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -1.0 / 5.0));
        }
    }

    if (!sol.forward_) {
        std::reverse(sol.t_.begin(), sol.t_.end());
        std::reverse(sol.u_.begin(), sol.u_.end());
        std::reverse(sol.v_.begin(), sol.v_.end());
        std::reverse(sol.a_.begin(), sol.a_.end());
    }
    return sol;
}

}  // namespace spectun
