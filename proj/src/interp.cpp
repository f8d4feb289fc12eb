#include "spectun/interp.hpp"

#include <algorithm>
#include <cmath>

#include "spectun/errors.hpp"

namespace spectun {

Pchip::Pchip(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const int n = int(x_.size());
    if (n < 2 || y_.size() != x_.size())
        throw DomainError("Pchip: need at least two matching samples");
    for (int i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw DomainError("Pchip: abscissae must increase strictly");

    std::vector<double> h(n - 1), delta(n - 1);
    for (int i = 0; i < n - 1; ++i) {
        h[i] = x_[i + 1] - x_[i];
        delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_.assign(n, 0.0);
    for (int i = 1; i < n - 1; ++i) {
        if (delta[i - 1] * delta[i] > 0.0) {
            // Weighted harmonic mean keeps the slope inside the monotone region.
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0.0) d = 0.0;
        else if (d0 * d1 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0)) d = 3.0 * d0;
        return d;
    };
    d_[0] = (n == 2) ? delta[0] : end_slope(h[0], h[1], delta[0], delta[1]);
    d_[n - 1] = (n == 2) ? delta[0]
                         : end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

int Pchip::find_interval(double x) const {
    if (x < x_.front() || x > x_.back())
        throw DomainError("Pchip: evaluation outside the table");
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    int i = int(it - x_.begin()) - 1;
    return std::clamp(i, 0, int(x_.size()) - 2);
}

double Pchip::eval(double x) const {
    const int i = find_interval(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
}

double Pchip::deriv(double x) const {
    const int i = find_interval(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double g00 = (6 * t2 - 6 * t) / h, g10 = 3 * t2 - 4 * t + 1;
    const double g01 = -(6 * t2 - 6 * t) / h, g11 = 3 * t2 - 2 * t;
    return g00 * y_[i] + g10 * d_[i] + g01 * y_[i + 1] + g11 * d_[i + 1];
}

double Pchip::deriv2(double x) const {
    const int i = find_interval(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double k00 = (12 * t - 6) / (h * h), k10 = (6 * t - 4) / h;
    const double k01 = -(12 * t - 6) / (h * h), k11 = (6 * t - 2) / h;
    return k00 * y_[i] + k10 * d_[i] + k01 * y_[i + 1] + k11 * d_[i + 1];
}

}  // namespace spectun
