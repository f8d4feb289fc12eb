#pragma once

#include <string>
#include <vector>

namespace spectun {

/// One measured magnitude q at radius r (q >= 0).
struct RateSample {
    double r;
    double q;
};

/// Result of testing a claim of the form q(r) = o(r^{-k}) as r -> 0.
struct RateReport {
    int claimed_order = 0;          ///< the k in o(r^{-k})
    double slope = 0.0;             ///< fitted log-log slope of q * r^k (inf if q == 0)
    double margin = 0.0;            ///< slope - required margin
    bool passed = false;
    std::vector<RateSample> samples;
    std::string quantity;           ///< label for reports
};

/// Required log-log slope of q * r^k for a pass. A genuine o(r^{-k}) quantity
/// produces slope >= 1 at dyadic radii; 0.5 separates it from O(r^{-k}) noise.
inline constexpr double kRateMargin = 0.5;

/// Fit the log-log slope of q_j * r_j^k against r_j and compare with the
/// margin. Radii must decrease strictly and at least six levels are required
/// (InsufficientData otherwise). Samples that are exactly zero to double
/// precision count as an automatic pass (infinite slope).
RateReport rate_check(const std::vector<RateSample>& samples, int claimed_order,
                      std::string quantity = {});

}  // namespace spectun
