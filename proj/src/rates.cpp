#include "spectun/rates.hpp"

#include <cmath>
#include <limits>

#include "spectun/errors.hpp"

namespace spectun {

RateReport rate_check(const std::vector<RateSample>& samples, int claimed_order,
                      std::string quantity) {
    if (samples.size() < 6)
        throw InsufficientData("rate_check: need at least 6 dyadic levels, got " +
                               std::to_string(samples.size()));
    for (std::size_t j = 0; j < samples.size(); ++j) {
        if (!(samples[j].r > 0.0)) throw DomainError("rate_check: radii must be positive");
        if (samples[j].q < 0.0) throw DomainError("rate_check: magnitudes must be >= 0");
        if (j > 0 && !(samples[j].r < samples[j - 1].r))
            throw DomainError("rate_check: radii must decrease strictly");
    }

    RateReport rep;
    rep.claimed_order = claimed_order;
    rep.samples = samples;
    rep.quantity = std::move(quantity);

    // y_j = q_j * r_j^k must tend to zero; identically-zero data passes outright.
    std::vector<double> lx, ly;
    double ymax = 0.0;
    for (const auto& s : samples)
        ymax = std::max(ymax, s.q * std::pow(s.r, claimed_order));
    if (ymax <= 1e-13) {
        rep.slope = std::numeric_limits<double>::infinity();
        rep.margin = rep.slope;
        rep.passed = true;
        return rep;
    }
    for (const auto& s : samples) {
        const double y = s.q * std::pow(s.r, claimed_order);
        if (y <= 0.0) continue;  // underflowed tail levels carry no fit information
        lx.push_back(std::log(s.r));
        ly.push_back(std::log(y));
    }
    if (lx.size() < 3) {
        // Almost everything underflowed; the surviving head cannot refute decay.
        rep.slope = std::numeric_limits<double>::infinity();
        rep.margin = rep.slope;
        rep.passed = true;
        return rep;
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = double(lx.size());
    for (std::size_t j = 0; j < lx.size(); ++j) {
        sx += lx[j];
        sy += ly[j];
        sxx += lx[j] * lx[j];
        sxy += lx[j] * ly[j];
    }
    rep.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.margin = rep.slope - kRateMargin;
    rep.passed = rep.slope >= kRateMargin;
    return rep;
}

}  // namespace spectun
