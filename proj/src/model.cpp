#include "spectun/model.hpp"

#include <cmath>
#include <limits>

#include "spectun/errors.hpp"

namespace spectun {

ModelManifold::ModelManifold(Params p, WarpProfile w, std::vector<double> base,
                             std::string label)
    : params(p), warp(std::move(w)), basepoints(std::move(base)), name(std::move(label)) {
    if (basepoints.size() > 2)
        throw DomainError("ModelManifold: at most two basepoints");
    const auto poles = warp.poles();
    for (double b : basepoints) {
        bool is_pole = false;
        for (double pole : poles) is_pole = is_pole || std::abs(b - pole) < 1e-12;
        if (!is_pole)
            throw DomainError("ModelManifold: basepoints must sit at pole caps");
    }
    if (basepoints.size() == 2 && std::abs(basepoints[0] - basepoints[1]) < 1e-12)
        throw DomainError("ModelManifold: basepoints must be distinct");
}

double ModelManifold::separation() const {
    if (basepoints.size() < 2) return std::numeric_limits<double>::infinity();
    return std::abs(basepoints[1] - basepoints[0]);
}

double ModelManifold::chart_radius(double basepoint) const {
    const double to_left = basepoint - warp.r_min();
    const double to_right = warp.r_max() - basepoint;
    return std::max(to_left, to_right);
}

}  // namespace spectun
