#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spectun/model.hpp"

namespace spectun {

enum class SpectralMethod { RadialEig, Rayleigh, Supersolution };
enum class BoundaryTag { Periodic, PoleRegular, Dirichlet };

/// Outcome of a radial eigensolve for -gamma*Lap + V on a closed model.
struct SpectralResult {
    double lambda1 = 0.0;          ///< Richardson-extrapolated from the two finest grids
    double lambda1_grid = 0.0;     ///< raw value on the requested grid
    double lambda1_coarse = 0.0;   ///< raw value at half resolution
    double fiber_mode_gap = 0.0;   ///< lambda1 of the first fiber band minus lambda1
    SpectralMethod method = SpectralMethod::RadialEig;
    BoundaryTag boundary = BoundaryTag::PoleRegular;
    int grid = 0;
    std::vector<double> r;         ///< cell centers
    std::vector<double> psi;       ///< ground state, max-normalized, positive

    /// Monotone-cubic interpolant of (r, psi) and its derivative, wrapped
    /// periodically on circles and clamped at interval ends, so it can be fed
    /// back into rayleigh_quotient on the full domain.
    std::function<double(double)> psi_fn, dpsi_fn;
};

/// Smallest eigenvalue of psi -> -gamma * W^-1 (W psi')' + V psi with weight
/// W = phi^{n-1}, V = Ric_min, discretized by finite volumes on `grid` cells.
/// Pole faces carry zero weight (the natural regularity condition); circle
/// domains close periodically. The ground state is also computed at grid/2
/// and Richardson-combined, and the solve is repeated with the fiber-band
/// potential V + gamma (n-1)/phi^2 to report fiber_mode_gap.
SpectralResult lambda1_radial(const ModelManifold& m, double gamma, int grid = 8192);

/// Quadratic-form quotient [int gamma (t')^2 W + V t^2 W] / [int t^2 W] for a
/// radial test function; an upper bound for lambda1 whenever t is admissible
/// (compactly supported or the model closed). Throws DomainError when the
/// denominator vanishes.
double rayleigh_quotient(const ModelManifold& m, double gamma,
                         const std::function<double(double)>& test,
                         const std::function<double(double)>& dtest);

/// A positive candidate function with two derivatives, fed to the pointwise
/// certificate below.
struct RadialCandidate {
    std::function<double(double)> u, du, ddu;
};

/// Pointwise defect D = -gamma Lap u + Ric_min u - (lambda - epsilon) u on a
/// uniform grid. D >= 0 everywhere (with u > 0) certifies
/// lambda1 >= lambda - epsilon.
struct DefectProfile {
    std::vector<double> r, defect, defect_over_u;
    double min = 0.0, argmin = 0.0;            ///< of the raw defect
    double min_over_u = 0.0, argmin_over_u = 0.0;
    bool nonnegative(double tol = 0.0) const { return min >= -tol; }
};

DefectProfile supersolution_defect(const ModelManifold& m, double gamma, double lambda,
                                   double epsilon, const RadialCandidate& u,
                                   double r_lo, double r_hi, int grid = 4096);

/// Cross-check of the two definitions of the spectral bound: whenever the
/// pointwise certificate holds (min D >= 0), the eigensolver must report
/// lambda1 >= lambda - epsilon - slack. Vacuously consistent when the
/// certificate fails or the model is not closed.
struct ConsistencyReport {
    bool consistent = true;
    bool certificate_holds = false;
    bool eigensolve_ran = false;
    double min_defect = 0.0;
    double lambda1 = 0.0;
    double slack = 1e-6;
};

ConsistencyReport eig_vs_defect_consistency(const ModelManifold& m, double gamma,
                                            double lambda, double epsilon,
                                            const RadialCandidate& u, int grid = 8192);

}  // namespace spectun
