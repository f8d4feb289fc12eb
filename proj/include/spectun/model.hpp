#pragma once

#include <string>
#include <vector>

#include "spectun/geometry.hpp"
#include "spectun/params.hpp"
#include "spectun/warp.hpp"

namespace spectun {

/// A rotationally symmetric background manifold together with the problem
/// parameters and the marked points where surgery (and the Green singularity)
/// happens. Basepoints must be pole caps so the polar chart around them is
/// the warp coordinate itself; models used purely for eigenvalue runs may
/// have none.
struct ModelManifold {
    Params params;
    WarpProfile warp;
    std::vector<double> basepoints;  ///< zero, one, or two pole positions
    std::string name;

    ModelManifold(Params p, WarpProfile w, std::vector<double> base = {},
                  std::string label = {});

    /// Smallest Ricci eigenvalue at radius r (the potential of the spectral
    /// problem), in 1/length^2.
    double potential(double r) const { return curvature(warp, params.n, r).ric_min; }

    bool closed() const { return warp.closed(); }
    /// Distance between the two basepoints (+inf when fewer than two).
    double separation() const;
    /// Distance from the given basepoint to the far end of its chart.
    double chart_radius(double basepoint) const;
};

}  // namespace spectun
