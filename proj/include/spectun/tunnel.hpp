#pragma once

#include <array>
#include <functional>
#include <vector>

#include "spectun/green.hpp"
#include "spectun/model.hpp"
#include "spectun/neck.hpp"
#include "spectun/rates.hpp"
#include "spectun/spectral.hpp"

namespace spectun {

enum class TunnelTopology { ConnectedSum, Handle };

/// Pointwise defect of the cone comparison: on dr^2 + f(r)^2 g_{S^{n-1}} the
/// function u = f^{2-n} satisfies Lap u = (2-n)(f''/f) u, so
///     -gamma Lap u + Ric(d/dr, d/dr) u = [gamma (n-2) - (n-1)] (f''/f) u,
/// which vanishes identically at the threshold gamma = (n-1)/(n-2) for every
/// profile f. The three-argument form evaluates the threshold defect.
double toy_identity_defect(const NeckProfile& f, int n, double r);
double toy_identity_defect(const NeckProfile& f, int n, double r, double gamma);

/// Sup of |threshold defect| / f^{2-n} over a uniform grid on [-2, 2].
struct ToyIdentityScan {
    double max_rel_defect = 0.0;
    double argmax = 0.0;
    int grid = 0;
    double h = 0.0;  ///< grid step (the difference step in the _fd variant)
};

/// Analytic profile derivatives: the identity holds to rounding.
ToyIdentityScan toy_identity_scan(const NeckProfile& f, int n, int grid = 4096);
/// Centered second-order differences at the grid step for every derivative,
/// of both f and f^{2-n}. The residual is O(h^2), so refining the grid 4x
/// must shrink it about 16x; a cheap probe that the discrete operator really
/// converges at its nominal order.
ToyIdentityScan toy_identity_scan_fd(const NeckProfile& f, int n, int grid = 4096);

/// The two ends being joined: two one-basepoint models (connected sum) or a
/// single model with two basepoints (handle). Green solutions are computed
/// once at construction and reused for every neck scale. Side 0 owns the
/// r < 0 half of the tunnel coordinate, side 1 the r > 0 half.
class TunnelContext {
  public:
    static TunnelContext connected_sum(ModelManifold left, ModelManifold right);
    static TunnelContext handle(ModelManifold m);

    TunnelTopology topology() const { return topo_; }
    const Params& params() const { return models_.front().params; }
    const ModelManifold& model(int side) const { return models_[model_of_side_[side]]; }
    const GreenSolution& green(int side) const { return greens_[model_of_side_[side]]; }
    double basepoint(int side) const { return basepoint_of_side_[side]; }
    /// Pole distance available on a side before its chart runs out.
    double chart_span(int side) const;
    /// Distance between the basepoints (+inf for a connected sum).
    double separation() const;
    /// Largest admissible neck scale, 0.1 * min{1, separation, epsilon}.
    double r0_max() const;

    // Ambient data on a side at pole distance s from its basepoint.
    FiberFactor fiber(int side, double s) const;            ///< a = (phi/s)^2
    RadialFunction green_w(int side, double s) const;       ///< w = u s^{n-2} / b
    RadialFunction ambient_phi(int side, double s) const;   ///< warp, s-derivatives
    RadialFunction ambient_u(int side, double s) const;     ///< Green u, s-derivatives

  private:
    TunnelContext() = default;

    TunnelTopology topo_ = TunnelTopology::ConnectedSum;
    std::vector<ModelManifold> models_;
    std::vector<GreenSolution> greens_;
    std::array<int, 2> model_of_side_{0, 1};
    std::array<double, 2> basepoint_of_side_{0.0, 0.0};
};

/// Interpolation data on the tunnel [-r0, r0]: beta blends the fiber factor
/// a_i(|r|) of the nearer side into 1, wtilde does the same for the
/// normalized Green profile w_i(|r|). Both are exactly 1 on |r| <= r0/3 and
/// exactly the ambient quantity on 2 r0/3 <= |r| <= r0.
struct BlendedData {
    double r0 = 0.0;
    std::function<double(double)> beta, dbeta, ddbeta;
    std::function<double(double)> wtilde, dwtilde, ddwtilde;
};

/// pre: 0 < r0 <= ctx.r0_max().
BlendedData blend_profiles(const TunnelContext& ctx, double r0);

/// Blend error across neck scales r0 = 2^-k, k in [k_lo, k_hi]: sup norms of
/// beta - 1, beta', beta'' over the tunnel must be o(1), o(1/r0), o(1/r0^2),
/// and the same for wtilde. These are the six decay claims that let the
/// epsilon/2 slack absorb the gluing error; all are verified by rate_check.
std::array<RateReport, 6> blend_asymptotics(const TunnelContext& ctx, int k_lo = 4,
                                            int k_hi = 10);

/// Value / first / second derivative gaps of the warp and of the candidate
/// where the tunnel meets the ambient manifolds (max over both interfaces).
struct InterfaceReport {
    std::array<double, 3> phi_gap{0.0, 0.0, 0.0};
    std::array<double, 3> u_gap{0.0, 0.0, 0.0};
    double worst = 0.0;
};

/// A surgered manifold. On the tunnel the warp is Phi = r0 f(r/r0) sqrt(beta)
/// and the candidate is u = b (r0 f)^{2-n} wtilde; past |r| = r0 both continue
/// as the ambient warp and Green solution of the nearer side. `assembled` is
/// the resulting closed model (interval for a connected sum, circle of
/// circumference separation() for a handle; the tunnel sits at [-r0, r0] in
/// its coordinate, and circle coordinates wrap). Basepoints are gone: the
/// delta sources were replaced by the neck.
struct TunnelAssembly {
    double r0 = 0.0;
    TunnelTopology topology = TunnelTopology::ConnectedSum;
    Params params;
    NeckProfile neck;
    BlendedData blend;
    InterfaceReport interface;

    // tunnel-local warp and candidate, |r| <= r0
    std::function<double(double)> Phi, dPhi, ddPhi;
    std::function<double(double)> u, du, ddu;

    ModelManifold assembled;
    RadialCandidate candidate;  ///< global: the tunnel u continued by the Green u

    TunnelAssembly(NeckProfile f, ModelManifold glued)
        : neck(std::move(f)), assembled(std::move(glued)) {}
};

/// Glue the tunnel into the ambient manifolds. Checks r0 against
/// ctx.r0_max(), positivity of Phi and u across the tunnel, and continuity of
/// value, first and second derivative at both interfaces (worst gap above
/// 1e-8 is an AssemblyError; for the canonical profile the junction is exact
/// to rounding because f - |x| vanishes to infinite order).
TunnelAssembly assemble_tunnel(const TunnelContext& ctx, double r0,
                               const NeckProfile& f);
TunnelAssembly assemble_tunnel(const TunnelContext& ctx, double r0);

/// Curvature of the glued warp at tunnel coordinate r, |r| <= r0, computed
/// through the surgery decomposition instead of the direct warp formulas:
/// mean curvature and shape tensor of the fiber spheres split into the neck
/// part f'/(r0 f) and the blend part beta'/(2 beta), radial Ricci from the
/// radial variation of those, spherical Ricci through the Gauss equation.
/// Agrees with curvature() on the assembled warp to rounding. The mixed
/// radial/spherical entry is carried by the fiber gradient of the conformal
/// factor, which is zero for a radial blend.
CurvatureSample decomposed_curvature(const TunnelAssembly& a, double r);

/// Supersolution defect over the tunnel, split into the core |r| <= 2 r0 / 3
/// (where the neck bending must dominate) and the matching band
/// 2 r0 / 3 <= |r| <= r0 (where the epsilon/2 slack must absorb the blend
/// error). Also samples the three structural quantities of the core
/// estimate: the leading term [gamma (n-2) - (n-1)] f''/(r0^2 f) and the
/// deviations |r f'/(r0 f) - 1| and |r/(r0 f) - 1| it has to beat.
struct RegionDefectReport {
    DefectProfile core;
    DefectProfile band;
    double min = 0.0;     ///< over the whole tunnel
    double argmin = 0.0;
    std::vector<double> r, lead, dev_slope, dev_ratio;

    bool nonnegative(double tol = 0.0) const { return min >= -tol; }
};

RegionDefectReport region_defect_scan(const TunnelAssembly& a, int grid = 4096);

/// Outcome of the neck-scale search. `tested` and `min_defect` cover the
/// whole grid in decreasing order; `admissible` lists the scales that
/// assembled cleanly with a nonnegative tunnel defect.
struct R0SearchResult {
    double r0_star = 0.0;  ///< largest admissible scale
    std::vector<double> tested;
    std::vector<double> min_defect;
    std::vector<double> admissible;
};

/// Scan neck scales r0_max * 2^{-j/2} down to 1e-4. Every grid point is
/// tried (admissibility is not assumed monotone in r0). r0_scan reports an
/// empty admissible set as r0_star = 0; r0_search turns that into a
/// NotAdmissible error, the expected outcome at or below the threshold
/// gamma = (n-1)/(n-2).
R0SearchResult r0_scan(const TunnelContext& ctx, const NeckProfile& f);
R0SearchResult r0_search(const TunnelContext& ctx, const NeckProfile& f);

}  // namespace spectun
