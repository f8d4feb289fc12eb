#pragma once

#include <cmath>

#include "spectun/errors.hpp"

namespace spectun {

/// Problem parameters shared across the pipeline.
///
/// `gamma` weights the Laplacian in the operator -gamma*Lap + Ric whose bottom
/// eigenvalue the construction preserves. `lambda` is the lower bound carried
/// by the input manifolds and `epsilon` the loss budget: the surgered manifold
/// is certified at level lambda - epsilon. Units: lambda, epsilon are 1/length^2;
/// gamma and n are dimensionless.
struct Params {
    int n = 3;              ///< dimension, n >= 3
    double gamma = 3.0;     ///< gamma > 0
    double lambda = 2.0;    ///< spectral level of the inputs
    double epsilon = 0.2;   ///< epsilon > 0, slack spent by the surgery

    Params() = default;
    Params(int n_, double gamma_, double lambda_, double epsilon_)
        : n(n_), gamma(gamma_), lambda(lambda_), epsilon(epsilon_) {
        validate();
    }

    void validate() const {
        if (n < 3) throw DomainError("Params: n must be >= 3");
        if (!(gamma > 0.0)) throw DomainError("Params: gamma must be > 0");
        if (!(epsilon > 0.0)) throw DomainError("Params: epsilon must be > 0");
        if (!std::isfinite(lambda)) throw DomainError("Params: lambda must be finite");
    }

    /// Threshold value of gamma; the tunnel construction needs gamma above it.
    /// This is not enforced here so that sub-threshold sweeps can run.
    double critical_gamma() const { return double(n - 1) / double(n - 2); }

    bool supercritical() const { return gamma > critical_gamma(); }
};

}  // namespace spectun
