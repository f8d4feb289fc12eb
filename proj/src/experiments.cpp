#include "spectun/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

#include "spectun/errors.hpp"
#include "spectun/green.hpp"
#include "spectun/neck.hpp"
#include "spectun/profile_io.hpp"
#include "spectun/spectral.hpp"
#include "spectun/tunnel.hpp"

namespace spectun {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Comma-separated artifact writer; numeric cells at full precision, an
/// optional text cell last.
class Csv {
  public:
    Csv(const std::string& path, const std::string& header) : out_(path) {
        if (!out_) throw ConfigError("cannot write artifact '" + path + "'");
        out_ << header << '\n';
    }
    void row(std::initializer_list<double> cells, const std::string& tail = {}) {
        bool first = true;
        for (double c : cells) {
            if (!first) out_ << ',';
            out_ << num(c);
            first = false;
        }
        if (!tail.empty()) out_ << (first ? "" : ",") << tail;
        out_ << '\n';
    }
    void text_row(const std::string& lead, std::initializer_list<double> cells) {
        out_ << lead;
        for (double c : cells) out_ << ',' << num(c);
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

std::string artifact_path(const ExperimentConfig& c, const std::string& name) {
    return (fs::path(c.out_dir) / name).string();
}

NeckProfile make_neck(const ExperimentConfig& c) {
    if (c.neck.kind == "file") return load_neck(c.neck.path);
    return NeckProfile::canonical();
}

WarpProfile make_warp(const ModelSpec& spec) {
    if (spec.kind == "euclidean") return WarpProfile::euclidean(spec.radius);
    if (spec.kind == "sphere") return WarpProfile::sphere(spec.curvature);
    if (spec.kind == "hyperbolic-cap")
        return WarpProfile::hyperbolic_cap(spec.radius, spec.curvature);
    if (spec.kind == "cylinder") return WarpProfile::cylinder(spec.length);
    if (spec.kind == "warped-circle")
        return WarpProfile::warped_circle(spec.length, spec.amplitude);
    if (spec.kind == "profile-file") return load_warp(spec.path);
    throw ConfigError("config: unknown model kind '" + spec.kind + "'");
}

TunnelContext make_context(const ExperimentConfig& c) {
    if (c.topology == "handle") return TunnelContext::handle(make_model(c.model, c.params, 2));
    ModelManifold left = make_model(c.model, c.params, 1);
    ModelManifold right = make_model(c.model2.value_or(c.model), c.params, 1);
    return TunnelContext::connected_sum(std::move(left), std::move(right));
}

// ---------------------------------------------------------------- toy identity

void run_toy(const ExperimentConfig& c, RunReport& rep) {
    const NeckProfile f = make_neck(c);
    const int n = c.params.n;
    const auto scan = toy_identity_scan(f, n, c.grid);
    const auto fd = toy_identity_scan_fd(f, n, c.grid);
    const auto fd4 = toy_identity_scan_fd(f, n, 4 * c.grid);
    const double ratio = fd.max_rel_defect / std::max(fd4.max_rel_defect, 1e-300);

    rep.add_check("toy-identity-residual", scan.max_rel_defect, "<=", 1e-10);
    rep.add_check("fd-refinement-ratio", ratio, ">=", 10.0);
    rep.scalars["max_rel_defect"] = scan.max_rel_defect;
    rep.scalars["argmax"] = scan.argmax;
    rep.scalars["fd_residual"] = fd.max_rel_defect;
    rep.scalars["fd_residual_refined"] = fd4.max_rel_defect;
    rep.scalars["fd_ratio"] = ratio;

    const std::string path = artifact_path(c, "toy_identity.csv");
    Csv csv(path, "r,rel_defect");
    for (int i = 0; i <= c.grid; ++i) {
        const double r = -2.0 + 4.0 * i / c.grid;
        const double d = std::abs(toy_identity_defect(f, n, r)) * std::pow(f.f(r), n - 2);
        csv.row({r, d});
    }
    rep.artifacts.push_back(path);
}

// ------------------------------------------------------------------ neck check

void run_neck(const ExperimentConfig& c, RunReport& rep) {
    const NeckProfile f = make_neck(c);
    const ConstraintReport cr = f.validate(c.grid);
    for (const auto& e : cr.entries) {
        if (e.checked)
            rep.add_flag("neck: " + e.constraint, e.passed);
        else
            rep.notes.push_back("unchecked (sampled data): " + e.constraint);
    }
    const auto bm = f.bending_margin(c.grid);
    rep.add_check("neck-bending-margin", bm.worst, ">=", -1e-12);
    const RateReport fr = f.flatness_rate();
    rep.add_check("neck-junction-flatness", fr.slope, ">=", kRateMargin);

    rep.scalars["f0"] = f.f0();
    rep.scalars["f_half"] = f.f(0.5);
    rep.scalars["df_half"] = f.df(0.5);
    rep.scalars["ddf_zero"] = f.ddf(0.0);
    rep.scalars["margin_half"] = f.margin(0.5);
    rep.scalars["bending_margin_min"] = bm.worst;
    rep.scalars["bending_margin_at"] = bm.location;
    rep.scalars["flatness_slope"] = fr.slope;
    if (!f.is_sampled()) rep.scalars["bump_constant"] = f.bump_constant();

    const std::string path = artifact_path(c, "neck_profile.csv");
    Csv csv(path, "x,f,df,ddf,margin");
    for (int i = 0; i <= c.grid; ++i) {
        const double x = 1.25 * i / c.grid;
        csv.row({x, f.f(x), f.df(x), f.ddf(x), f.margin(x)});
    }
    rep.artifacts.push_back(path);
}

// ----------------------------------------------------------------- green solve

void run_green(const ExperimentConfig& c, RunReport& rep) {
    const int want = c.model.basepoints.empty() ? 1 : int(c.model.basepoints.size());
    const ModelManifold m = make_model(c.model, c.params, want);
    const GreenSolution sol = green_solve(m);
    const GreenMeta& meta = sol.meta();

    rep.add_check("green-residual", meta.residual, "<=", 1e-8);
    rep.add_check("delta-mass-0", std::abs(meta.mass[0] - 1.0), "<=", 1e-6);
    if (sol.num_basepoints() == 2)
        rep.add_check("delta-mass-1", std::abs(meta.mass[1] - 1.0), "<=", 1e-6);
    const auto rates = green_asymptotics_check(sol);
    const char* rate_names[3] = {"w-decay", "dw-decay", "ddw-decay"};
    for (int k = 0; k < 3; ++k)
        rep.add_check(rate_names[k], rates[k].slope, ">=", kRateMargin);

    rep.scalars["b"] = sol.b();
    rep.scalars["residual"] = meta.residual;
    rep.scalars["match_point"] = meta.match_point;
    rep.scalars["bound_constant"] = meta.bound_constant;
    rep.scalars["delta_mass_0"] = meta.mass[0];
    if (sol.num_basepoints() == 2) rep.scalars["delta_mass_1"] = meta.mass[1];
    if (meta.eigensolve_ran) rep.scalars["ambient_lambda1"] = meta.lambda1;
    for (int k = 0; k < 3; ++k)
        rep.scalars[std::string(rate_names[k]) + "_slope"] = rates[k].slope;
    const auto& w = m.warp;
    double r_probe = 0.5 * (w.r_min() + w.r_max());
    for (double bp : m.basepoints)
        if (std::abs(r_probe - bp) < 1e-9) r_probe += 0.05 * w.length();
    rep.scalars["u_mid"] = sol.u(r_probe);

    const std::string path = artifact_path(c, "green.csv");
    Csv csv(path, "r,u,w,dw,ddw");
    const double h = w.length() / c.grid;
    for (int i = 0; i < c.grid; ++i) {
        const double r = w.r_min() + (i + 0.5) * h;
        int nearest = 0;
        double s = std::abs(r - m.basepoints[0]);
        for (int b = 1; b < sol.num_basepoints(); ++b)
            if (std::abs(r - m.basepoints[b]) < s) {
                s = std::abs(r - m.basepoints[b]);
                nearest = b;
            }
        csv.row({r, sol.u(r), sol.w(nearest, s), sol.dw(nearest, s), sol.ddw(nearest, s)});
    }
    rep.artifacts.push_back(path);
}

// ----------------------------------------------------------- tunnel experiments

/// Ambient defect rows for the surgered model, outside the tunnel.
void ambient_rows(const TunnelAssembly& a, double t_lo, double t_hi, int cells,
                  std::vector<std::tuple<double, double, double, std::string>>& rows) {
    if (!(t_hi > t_lo)) return;
    const auto& p = a.params;
    const DefectProfile d = supersolution_defect(a.assembled, p.gamma, p.lambda, p.epsilon,
                                                 a.candidate, t_lo, t_hi, cells);
    for (std::size_t i = 0; i < d.r.size(); ++i)
        rows.emplace_back(d.r[i], d.defect[i], d.defect_over_u[i], "ambient");
}

void write_tunnel_csv(const ExperimentConfig& c, const TunnelAssembly& a,
                      const RegionDefectReport& scan, RunReport& rep) {
    using Row = std::tuple<double, double, double, std::string>;  // r, D, D/u, region
    std::vector<Row> rows;
    const double cut = 2.0 * a.r0 / 3.0;
    auto add_profile = [&](const DefectProfile& d, bool band) {
        for (std::size_t i = 0; i < d.r.size(); ++i) {
            const bool in_band = std::abs(d.r[i]) >= cut * (1.0 - 1e-12);
            if (band != in_band) continue;
            rows.emplace_back(d.r[i], d.defect[i], d.defect_over_u[i], band ? "band" : "core");
        }
    };
    add_profile(scan.core, false);
    add_profile(scan.band, true);

    const auto& dom = a.assembled.warp;
    const double margin = a.r0 * 1e-9;
    if (dom.is_circle()) {
        ambient_rows(a, a.r0 + margin, dom.r_max() - margin, 512, rows);
    } else {
        ambient_rows(a, dom.r_min(), -a.r0 - margin, 256, rows);
        ambient_rows(a, a.r0 + margin, dom.r_max(), 256, rows);
    }
    std::sort(rows.begin(), rows.end(),
              [](const Row& x, const Row& y) { return std::get<0>(x) < std::get<0>(y); });

    const std::string path = artifact_path(c, "tunnel.csv");
    Csv csv(path, "r,Phi,u,D,region");
    for (const auto& [r, D, Du, region] : rows)
        csv.row({r, a.assembled.warp.phi(r), a.candidate.u(r), D}, region);
    rep.artifacts.push_back(path);
}

/// Shared front half of tunnel-build and defect-scan: pick the neck scale
/// (fixed or searched) and assemble. Returns false when the search came up
/// empty, with the failure already recorded.
bool build_assembly(const ExperimentConfig& c, RunReport& rep, const TunnelContext& ctx,
                    const NeckProfile& f, double& r0, std::optional<TunnelAssembly>& out) {
    if (c.r0 > 0.0) {
        r0 = c.r0;
        rep.scalars["r0_searched"] = 0.0;
    } else {
        const R0SearchResult sr = r0_scan(ctx, f);
        rep.scalars["r0_searched"] = 1.0;
        rep.scalars["tested_count"] = double(sr.tested.size());
        rep.scalars["admissible_count"] = double(sr.admissible.size());
        rep.add_check("admissible-neck-scales", double(sr.admissible.size()), ">=", 1.0);
        if (sr.admissible.empty()) {
            std::ostringstream msg;
            msg << "no admissible neck scale in [1e-4, " << ctx.r0_max() << "]";
            if (!ctx.params().supercritical())
                msg << "; gamma = " << ctx.params().gamma << " is at or below the threshold "
                    << ctx.params().critical_gamma();
            rep.notes.push_back(msg.str());
            rep.scalars["r0_star"] = 0.0;
            return false;
        }
        r0 = sr.r0_star;
    }
    out.emplace(assemble_tunnel(ctx, r0, f));
    rep.scalars["r0_star"] = r0;
    return true;
}

void run_tunnel_build(const ExperimentConfig& c, RunReport& rep) {
    const TunnelContext ctx = make_context(c);
    const NeckProfile f = make_neck(c);
    for (int side = 0; side < 2; ++side)
        rep.scalars["green_residual_" + std::to_string(side)] =
            ctx.green(side).meta().residual;

    double r0 = 0.0;
    std::optional<TunnelAssembly> built;
    if (!build_assembly(c, rep, ctx, f, r0, built)) return;
    const TunnelAssembly& a = *built;
    const RegionDefectReport scan = region_defect_scan(a, c.grid);

    rep.add_check("tunnel-defect-min", scan.min, ">=", 0.0);
    rep.add_check("interface-gap", a.interface.worst, "<=", 1e-8);

    const Params& p = c.params;
    const SpectralResult sp = lambda1_radial(a.assembled, p.gamma, c.eig_grid);
    rep.add_check("assembled-lambda1", sp.lambda1, ">=", p.lambda - p.epsilon - 1e-5);
    rep.add_check("fiber-mode-gap", sp.fiber_mode_gap, ">=", 0.0);

    // Soundness of the certificate route: a nonnegative defect over the whole
    // surgered manifold must be matched by the independent eigensolve.
    const auto& dom = a.assembled.warp;
    const DefectProfile full = supersolution_defect(a.assembled, p.gamma, p.lambda, p.epsilon,
                                                    a.candidate, dom.r_min(), dom.r_max(),
                                                    c.grid);
    const bool consistent = !(full.min >= 0.0) || sp.lambda1 >= p.lambda - p.epsilon - 1e-5;
    rep.add_flag("certificate-consistent", consistent);

    rep.scalars["tunnel_min_defect"] = scan.min;
    rep.scalars["tunnel_argmin"] = scan.argmin;
    rep.scalars["core_min_defect"] = scan.core.min;
    rep.scalars["band_min_defect"] = scan.band.min;
    rep.scalars["full_min_defect"] = full.min;
    rep.scalars["interface_gap"] = a.interface.worst;
    rep.scalars["lambda1"] = sp.lambda1;
    rep.scalars["lambda1_grid"] = sp.lambda1_grid;
    rep.scalars["fiber_mode_gap"] = sp.fiber_mode_gap;
    rep.scalars["b"] = ctx.green(0).b();
    if (ctx.topology() == TunnelTopology::Handle)
        rep.scalars["circumference"] = ctx.separation();

    write_tunnel_csv(c, a, scan, rep);
}

void run_defect_scan(const ExperimentConfig& c, RunReport& rep) {
    const TunnelContext ctx = make_context(c);
    const NeckProfile f = make_neck(c);
    double r0 = 0.0;
    std::optional<TunnelAssembly> built;
    if (!build_assembly(c, rep, ctx, f, r0, built)) return;
    const RegionDefectReport scan = region_defect_scan(*built, c.grid);

    rep.add_check("tunnel-defect-min", scan.min, ">=", 0.0);
    rep.add_check("core-defect-min", scan.core.min, ">=", 0.0);
    rep.add_check("band-defect-min", scan.band.min, ">=", 0.0);

    rep.scalars["tunnel_min_defect"] = scan.min;
    rep.scalars["tunnel_argmin"] = scan.argmin;
    rep.scalars["core_min_defect"] = scan.core.min;
    rep.scalars["core_min_over_u"] = scan.core.min_over_u;
    rep.scalars["band_min_defect"] = scan.band.min;
    rep.scalars["band_min_over_u"] = scan.band.min_over_u;
    rep.scalars["lead_min"] = *std::min_element(scan.lead.begin(), scan.lead.end());
    rep.scalars["dev_slope_max"] =
        *std::max_element(scan.dev_slope.begin(), scan.dev_slope.end());
    rep.scalars["dev_ratio_max"] =
        *std::max_element(scan.dev_ratio.begin(), scan.dev_ratio.end());

    const std::string path = artifact_path(c, "defect.csv");
    Csv csv(path, "r,D,D_over_u,region");
    using Row = std::tuple<double, double, double, std::string>;
    std::vector<Row> rows;
    const double cut = 2.0 * r0 / 3.0;
    auto add = [&](const DefectProfile& d, bool band) {
        for (std::size_t i = 0; i < d.r.size(); ++i) {
            const bool in_band = std::abs(d.r[i]) >= cut * (1.0 - 1e-12);
            if (band != in_band) continue;
            rows.emplace_back(d.r[i], d.defect[i], d.defect_over_u[i], band ? "band" : "core");
        }
    };
    add(scan.core, false);
    add(scan.band, true);
    std::sort(rows.begin(), rows.end(),
              [](const Row& x, const Row& y) { return std::get<0>(x) < std::get<0>(y); });
    for (const auto& [r, D, Du, region] : rows) csv.row({r, D, Du}, region);
    rep.artifacts.push_back(path);
}

// --------------------------------------------------------------------- lambda1

/// Random smooth test functions compatible with the discretization's natural
/// boundary behavior: free at poles, vanishing at cuts, periodic on circles.
struct TestFunction {
    std::function<double(double)> t, dt;
};

TestFunction random_test(const ModelManifold& m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coin(-1.0, 1.0);
    const double a = m.warp.r_min(), span = m.warp.length();
    constexpr double pi = 3.14159265358979323846;

    std::vector<double> cs, sn;
    double scale = 0.0;
    do {
        cs.clear();
        sn.clear();
        for (int k = 0; k < 5; ++k) {
            cs.push_back(coin(rng));
            sn.push_back(coin(rng));
        }
        scale = 0.0;
        for (int k = 0; k < 5; ++k) scale = std::max({scale, std::abs(cs[k]), std::abs(sn[k])});
    } while (scale < 0.1);

    if (m.warp.is_circle()) {
        return {[=](double r) {
                    double v = 1.0;
                    for (int k = 1; k <= 5; ++k) {
                        const double th = 2.0 * pi * k * (r - a) / span;
                        v += cs[k - 1] * std::cos(th) + sn[k - 1] * std::sin(th);
                    }
                    return v;
                },
                [=](double r) {
                    double v = 0.0;
                    for (int k = 1; k <= 5; ++k) {
                        const double th = 2.0 * pi * k * (r - a) / span;
                        const double w = 2.0 * pi * k / span;
                        v += w * (-cs[k - 1] * std::sin(th) + sn[k - 1] * std::cos(th));
                    }
                    return v;
                }};
    }
    const auto iv = std::get<Interval>(m.warp.domain());
    const bool fix_left = iv.left == EndKind::Boundary;
    const bool fix_right = iv.right == EndKind::Boundary;
    // Frequencies chosen so fixed ends vanish and free ends have zero slope.
    auto freq = [&](int k) {
        if (fix_left && fix_right) return (k + 1) * pi;
        if (fix_left || fix_right) return (k + 0.5) * pi;
        return double(k) * pi;
    };
    const bool sine = fix_left;
    const bool constant_term = !fix_left && !fix_right;
    return {[=](double r) {
                const double x = (r - a) / span;
                double v = constant_term ? 1.0 + cs[0] : 0.0;
                for (int k = constant_term ? 1 : 0; k < 5; ++k)
                    v += cs[k] * (sine ? std::sin(freq(k) * x) : std::cos(freq(k) * x));
                return v;
            },
            [=](double r) {
                const double x = (r - a) / span;
                double v = 0.0;
                for (int k = constant_term ? 1 : 0; k < 5; ++k)
                    v += cs[k] * freq(k) / span *
                         (sine ? std::cos(freq(k) * x) : -std::sin(freq(k) * x));
                return v;
            }};
}

void run_lambda1(const ExperimentConfig& c, RunReport& rep) {
    const ModelManifold m = make_model(c.model, c.params, -1);
    const SpectralResult sp = lambda1_radial(m, c.params.gamma, c.eig_grid);

    rep.add_check("fiber-mode-gap", sp.fiber_mode_gap, ">=", 0.0);
    double rq_min = std::numeric_limits<double>::infinity();
    if (c.rq_samples > 0) {
        std::mt19937_64 rng(c.seed);
        for (int i = 0; i < c.rq_samples; ++i) {
            const TestFunction t = random_test(m, rng);
            rq_min = std::min(rq_min, rayleigh_quotient(m, c.params.gamma, t.t, t.dt));
        }
        rep.add_check("rayleigh-lower-bound", rq_min - sp.lambda1, ">=", -1e-8);
    }

    rep.scalars["lambda1"] = sp.lambda1;
    rep.scalars["lambda1_grid"] = sp.lambda1_grid;
    rep.scalars["lambda1_coarse"] = sp.lambda1_coarse;
    rep.scalars["fiber_mode_gap"] = sp.fiber_mode_gap;
    if (c.rq_samples > 0) rep.scalars["rq_min"] = rq_min;

    const std::string path = artifact_path(c, "spectrum.csv");
    Csv csv(path, "r,psi");
    for (std::size_t i = 0; i < sp.r.size(); ++i) csv.row({sp.r[i], sp.psi[i]});
    rep.artifacts.push_back(path);
}

// -------------------------------------------------------------- threshold scan

void run_threshold(const ExperimentConfig& c, RunReport& rep) {
    const std::vector<double> gammas = c.sweep.resolved();
    if (gammas.empty())
        throw ConfigError("config: sweep range holds no grid points; provide 'values'");
    const NeckProfile f = make_neck(c);

    struct Row {
        double gamma = 0.0;
        bool admissible = false;
        bool failed = false;
        double r0_star = kNaN;
        double best_defect = kNaN;
        std::string note;
    };
    std::vector<Row> rows(gammas.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= gammas.size()) return;
            Row& row = rows[i];
            row.gamma = gammas[i];
            try {
                ExperimentConfig ci = c;
                ci.params.gamma = gammas[i];
                ci.params.validate();
                const TunnelContext ctx = make_context(ci);
                const R0SearchResult sr = r0_scan(ctx, f);
                row.admissible = !sr.admissible.empty();
                row.r0_star = row.admissible ? sr.r0_star : 0.0;
                double best = -std::numeric_limits<double>::infinity();
                for (double md : sr.min_defect)
                    if (std::isfinite(md)) best = std::max(best, md);
                if (std::isfinite(best)) row.best_defect = best;
            } catch (const std::exception& e) {
                row.failed = true;
                row.note = e.what();
            }
        }
    };
    const int workers = std::min<int>(worker_count(), int(gammas.size()));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int k = 0; k < workers; ++k) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    const double crit = c.params.critical_gamma();
    double gamma_hat = kNaN, r0_at_hat = kNaN, below = kNaN;
    for (const Row& row : rows)
        if (row.admissible) {
            gamma_hat = row.gamma;
            r0_at_hat = row.r0_star;
            break;
        }
    for (const Row& row : rows) {
        if (row.failed || row.admissible) continue;
        if (!std::isnan(gamma_hat) && row.gamma >= gamma_hat) break;
        below = row.gamma;
    }
    for (const Row& row : rows)
        if (row.failed)
            rep.notes.push_back("gamma = " + num(row.gamma) + ": " + row.note);

    rep.add_flag("threshold-flip-located", !std::isnan(gamma_hat) && !std::isnan(below));
    rep.add_flag("threshold-above-critical", !std::isnan(gamma_hat) && gamma_hat > crit);
    rep.scalars["gamma_hat"] = gamma_hat;
    rep.scalars["gamma_below_hat"] = below;
    rep.scalars["critical_gamma"] = crit;
    rep.scalars["r0_star_at_hat"] = r0_at_hat;

    const std::string path = artifact_path(c, "threshold.csv");
    Csv csv(path, "gamma,admissible,r0_star,min_defect");
    for (const Row& row : rows)
        csv.row({row.gamma, row.admissible ? 1.0 : 0.0, row.r0_star, row.best_defect});
    rep.artifacts.push_back(path);
}

// ----------------------------------------------------------- blend asymptotics

void run_asymptotics(const ExperimentConfig& c, RunReport& rep) {
    const TunnelContext ctx = make_context(c);
    const double r0_top = std::ldexp(1.0, -c.k_lo);
    if (r0_top > ctx.r0_max()) {
        std::ostringstream msg;
        msg << "config: the coarsest dyadic scale 2^-" << c.k_lo << " = " << r0_top
            << " exceeds the neck ceiling " << ctx.r0_max()
            << " = 0.1 min{1, separation, epsilon}; raise 'k_lo' or loosen "
               "epsilon/separation";
        throw ConfigError(msg.str());
    }
    const auto rates = blend_asymptotics(ctx, c.k_lo, c.k_hi);
    const char* names[6] = {"beta-value-rate",  "beta-slope-rate", "beta-curvature-rate",
                            "wtilde-value-rate", "wtilde-slope-rate",
                            "wtilde-curvature-rate"};
    for (int k = 0; k < 6; ++k) {
        rep.add_check(names[k], rates[k].slope, ">=", kRateMargin);
        rep.scalars[std::string(names[k]) + "_slope"] = rates[k].slope;
    }

    const std::string path = artifact_path(c, "rates.csv");
    Csv csv(path, "quantity,r0,sup");
    for (const auto& rr : rates)
        for (const auto& s : rr.samples) csv.text_row(rr.quantity, {s.r, s.q});
    rep.artifacts.push_back(path);
}

}  // namespace

ModelManifold make_model(const ModelSpec& spec, const Params& p, int want_basepoints) {
    WarpProfile w = make_warp(spec);
    std::vector<double> bps = spec.basepoints;
    if (want_basepoints >= 0) {
        if (bps.empty() && want_basepoints > 0) {
            const auto poles = w.poles();
            if (int(poles.size()) < want_basepoints)
                throw ConfigError("config: model '" + spec.kind + "' has " +
                                  std::to_string(poles.size()) +
                                  " pole cap(s) but the run needs " +
                                  std::to_string(want_basepoints) + " basepoint(s)");
            bps.assign(poles.begin(), poles.begin() + want_basepoints);
        }
        if (int(bps.size()) != want_basepoints)
            throw ConfigError("config: model '" + spec.kind + "' specifies " +
                              std::to_string(bps.size()) + " basepoint(s); the run needs " +
                              std::to_string(want_basepoints));
    }
    const std::string label = w.name();
    try {
        return ModelManifold(p, std::move(w), std::move(bps), label);
    } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

int worker_count() {
    if (const char* env = std::getenv("SPECTUN_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*env == '\0' || (end && *end != '\0') || v < 1 || v > 256)
            throw ConfigError("SPECTUN_WORKERS must be an integer in [1, 256]");
        return int(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : int(hc);
}

RunReport run_experiment(const ExperimentConfig& c) {
    const auto t0 = std::chrono::steady_clock::now();
    std::error_code ec;
    fs::create_directories(c.out_dir, ec);
    if (ec) throw ConfigError("config: cannot create output directory '" + c.out_dir + "'");

    RunReport rep;
    rep.experiment = kind_name(c.kind);
    rep.config = config_to_json(c);
    switch (c.kind) {
        case ExperimentKind::ToyIdentity: run_toy(c, rep); break;
        case ExperimentKind::NeckCheck: run_neck(c, rep); break;
        case ExperimentKind::GreenSolve: run_green(c, rep); break;
        case ExperimentKind::TunnelBuild: run_tunnel_build(c, rep); break;
        case ExperimentKind::DefectScan: run_defect_scan(c, rep); break;
        case ExperimentKind::Lambda1: run_lambda1(c, rep); break;
        case ExperimentKind::ThresholdScan: run_threshold(c, rep); break;
        case ExperimentKind::Asymptotics: run_asymptotics(c, rep); break;
    }
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    save_report(rep, (fs::path(c.out_dir) / "report.json").string());
    return rep;
}

}  // namespace spectun
