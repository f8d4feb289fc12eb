#pragma once

#include <vector>

namespace spectun {

/// Monotone cubic (Fritsch-Carlson) interpolant of tabulated data.
///
/// Piecewise cubic Hermite with slopes limited so the interpolant preserves
/// monotonicity of the data; C^1 overall, second derivative is piecewise
/// linear and jumps at the knots. Used for sampled profile tables; callers
/// that need third derivatives must reject this representation.
class Pchip {
  public:
    Pchip() = default;
    Pchip(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const { return eval(x); }
    double eval(double x) const;
    double deriv(double x) const;
    double deriv2(double x) const;

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

  private:
    int find_interval(double x) const;
    std::vector<double> x_, y_, d_;  // knots, values, knot slopes
};

}  // namespace spectun
