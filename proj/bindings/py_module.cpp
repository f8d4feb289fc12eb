#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"
#include "spectun/config.hpp"
#include "spectun/errors.hpp"
#include "spectun/experiments.hpp"
#include "spectun/geometry.hpp"
#include "spectun/green.hpp"
#include "spectun/model.hpp"
#include "spectun/neck.hpp"
#include "spectun/profile_io.hpp"
#include "spectun/report.hpp"
#include "spectun/spectral.hpp"
#include "spectun/tunnel.hpp"
#include "spectun/warp.hpp"

namespace py = pybind11;
using namespace spectun;

PYBIND11_MODULE(_core, m) {
    m.doc() = "warped-product surgery toolkit: model manifolds, Green solutions, "
              "neck assembly, and spectral certificates";

    const py::handle base = py::register_exception<Error>(m, "Error");
    py::register_exception<DomainError>(m, "DomainError", base);
    py::register_exception<SingularityError>(m, "SingularityError", base);
    py::register_exception<ConstructionError>(m, "ConstructionError", base);
    py::register_exception<InsufficientData>(m, "InsufficientData", base);
    py::register_exception<NoPositiveSolution>(m, "NoPositiveSolution", base);
    py::register_exception<SolverDiverged>(m, "SolverDiverged", base);
    py::register_exception<RadiusTooLarge>(m, "RadiusTooLarge", base);
    py::register_exception<AssemblyError>(m, "AssemblyError", base);
    py::register_exception<NotAdmissible>(m, "NotAdmissible", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);

    py::class_<Params>(m, "Params")
        .def(py::init<>())
        .def(py::init<int, double, double, double>(), py::arg("n"), py::arg("gamma"),
             py::arg("lam"), py::arg("epsilon"))
        .def_readwrite("n", &Params::n)
        .def_readwrite("gamma", &Params::gamma)
        .def_readwrite("lam", &Params::lambda, "spectral level of the inputs")
        .def_readwrite("epsilon", &Params::epsilon)
        .def("validate", &Params::validate)
        .def("critical_gamma", &Params::critical_gamma)
        .def("supercritical", &Params::supercritical)
        .def("__repr__", [](const Params& p) {
            return "Params(n=" + std::to_string(p.n) + ", gamma=" + std::to_string(p.gamma) +
                   ", lam=" + std::to_string(p.lambda) +
                   ", epsilon=" + std::to_string(p.epsilon) + ")";
        });

    py::class_<WarpProfile>(m, "WarpProfile")
        .def_static("euclidean", &WarpProfile::euclidean, py::arg("r_max"))
        .def_static("sphere", &WarpProfile::sphere, py::arg("curvature") = 1.0)
        .def_static("hyperbolic_cap", &WarpProfile::hyperbolic_cap, py::arg("r_max"),
                    py::arg("curvature") = -1.0)
        .def_static("space_form", &WarpProfile::space_form, py::arg("curvature"),
                    py::arg("r_max"))
        .def_static("cylinder", &WarpProfile::cylinder, py::arg("length"))
        .def_static("warped_circle", &WarpProfile::warped_circle, py::arg("length"),
                    py::arg("amplitude"))
        .def("phi", &WarpProfile::phi, py::arg("r"))
        .def("dphi", &WarpProfile::dphi, py::arg("r"))
        .def("ddphi", &WarpProfile::ddphi, py::arg("r"))
        .def("r_min", &WarpProfile::r_min)
        .def("r_max", &WarpProfile::r_max)
        .def("length", &WarpProfile::length)
        .def("is_circle", &WarpProfile::is_circle)
        .def("closed", &WarpProfile::closed)
        .def("poles", &WarpProfile::poles)
        .def_property_readonly("name", &WarpProfile::name);

    m.def("load_warp", &load_warp, py::arg("path"));
    m.def("save_warp", &save_warp, py::arg("warp"), py::arg("path"),
          py::arg("samples") = 513);

    py::class_<CurvatureSample>(m, "CurvatureSample")
        .def_readonly("r", &CurvatureSample::r)
        .def_readonly("k_rad", &CurvatureSample::k_rad)
        .def_readonly("k_sph", &CurvatureSample::k_sph)
        .def_readonly("ric_rr", &CurvatureSample::ric_rr)
        .def_readonly("ric_ee", &CurvatureSample::ric_ee)
        .def_readonly("ric_mixed", &CurvatureSample::ric_mixed)
        .def_readonly("ric_min", &CurvatureSample::ric_min);
    m.def("curvature", &curvature, py::arg("warp"), py::arg("n"), py::arg("r"),
          "all curvature components of the warped metric at radius r");
    m.def("ricci_radial", &ricci_radial, py::arg("warp"), py::arg("n"), py::arg("r"));
    m.def("ricci_tangential", &ricci_tangential, py::arg("warp"), py::arg("n"),
          py::arg("r"));
    m.def("sphere_area", &sphere_area, py::arg("n"), "area of the unit (n-1)-sphere");

    py::class_<ConstraintReport::Entry>(m, "ConstraintEntry")
        .def_readonly("constraint", &ConstraintReport::Entry::constraint)
        .def_readonly("checked", &ConstraintReport::Entry::checked)
        .def_readonly("passed", &ConstraintReport::Entry::passed)
        .def_readonly("worst", &ConstraintReport::Entry::worst)
        .def_readonly("location", &ConstraintReport::Entry::location);
    py::class_<ConstraintReport>(m, "ConstraintReport")
        .def_readonly("entries", &ConstraintReport::entries)
        .def("ok", &ConstraintReport::ok)
        .def("summary", &ConstraintReport::summary);

    py::class_<RateSample>(m, "RateSample")
        .def_readonly("r", &RateSample::r)
        .def_readonly("q", &RateSample::q);
    py::class_<RateReport>(m, "RateReport")
        .def_readonly("claimed_order", &RateReport::claimed_order)
        .def_readonly("slope", &RateReport::slope)
        .def_readonly("margin", &RateReport::margin)
        .def_readonly("passed", &RateReport::passed)
        .def_readonly("samples", &RateReport::samples)
        .def_readonly("quantity", &RateReport::quantity);

    py::class_<NeckProfile>(m, "NeckProfile")
        .def_static("canonical", &NeckProfile::canonical)
        .def("f", &NeckProfile::f, py::arg("x"))
        .def("df", &NeckProfile::df, py::arg("x"))
        .def("ddf", &NeckProfile::ddf, py::arg("x"))
        .def("f0", &NeckProfile::f0, "the neck radius f(0)")
        .def("margin", &NeckProfile::margin, py::arg("x"),
             "bending dominance margin f''/f - deviations/2")
        .def("bump_constant", &NeckProfile::bump_constant)
        .def("is_sampled", &NeckProfile::is_sampled)
        .def("validate", &NeckProfile::validate, py::arg("grid") = 4096)
        .def("bending_margin", &NeckProfile::bending_margin, py::arg("grid") = 4096)
        .def("flatness_rate", &NeckProfile::flatness_rate);
    m.def("load_neck", &load_neck, py::arg("path"));

    py::class_<ToyIdentityScan>(m, "ToyIdentityScan")
        .def_readonly("max_rel_defect", &ToyIdentityScan::max_rel_defect)
        .def_readonly("argmax", &ToyIdentityScan::argmax)
        .def_readonly("grid", &ToyIdentityScan::grid)
        .def_readonly("h", &ToyIdentityScan::h);
    m.def("toy_identity_defect",
          py::overload_cast<const NeckProfile&, int, double>(&toy_identity_defect),
          py::arg("f"), py::arg("n"), py::arg("r"));
    m.def("toy_identity_defect",
          py::overload_cast<const NeckProfile&, int, double, double>(&toy_identity_defect),
          py::arg("f"), py::arg("n"), py::arg("r"), py::arg("gamma"));
    m.def("toy_identity_scan", &toy_identity_scan, py::arg("f"), py::arg("n"),
          py::arg("grid") = 4096);
    m.def("toy_identity_scan_fd", &toy_identity_scan_fd, py::arg("f"), py::arg("n"),
          py::arg("grid") = 4096);

    py::class_<ModelManifold>(m, "ModelManifold")
        .def(py::init<Params, WarpProfile, std::vector<double>, std::string>(),
             py::arg("params"), py::arg("warp"), py::arg("basepoints") = std::vector<double>{},
             py::arg("name") = std::string{})
        .def_readonly("params", &ModelManifold::params)
        .def_readonly("warp", &ModelManifold::warp)
        .def_readonly("basepoints", &ModelManifold::basepoints)
        .def_readonly("name", &ModelManifold::name)
        .def("potential", &ModelManifold::potential, py::arg("r"),
             "smallest Ricci eigenvalue at r")
        .def("closed", &ModelManifold::closed)
        .def("separation", &ModelManifold::separation)
        .def("chart_radius", &ModelManifold::chart_radius, py::arg("basepoint"));

    py::class_<GreenMeta>(m, "GreenMeta")
        .def_readonly("mu", &GreenMeta::mu)
        .def_readonly("r_inner", &GreenMeta::r_inner)
        .def_readonly("match_point", &GreenMeta::match_point)
        .def_readonly("residual", &GreenMeta::residual)
        .def_readonly("bound_constant", &GreenMeta::bound_constant)
        .def_readonly("lambda1", &GreenMeta::lambda1)
        .def_readonly("eigensolve_ran", &GreenMeta::eigensolve_ran)
        .def_readonly("mass", &GreenMeta::mass)
        .def_readonly("matching_coefficient", &GreenMeta::matching_coefficient);
    py::class_<GreenSolution>(m, "GreenSolution")
        .def("u", &GreenSolution::u, py::arg("r"))
        .def("w", &GreenSolution::w, py::arg("basepoint"), py::arg("s"),
             "normalized profile u s^{n-2} / b at pole distance s")
        .def("dw", &GreenSolution::dw, py::arg("basepoint"), py::arg("s"))
        .def("ddw", &GreenSolution::ddw, py::arg("basepoint"), py::arg("s"))
        .def("b", &GreenSolution::b)
        .def("num_basepoints", &GreenSolution::num_basepoints)
        .def("meta", &GreenSolution::meta, py::return_value_policy::copy);
    m.def("green_solve", &green_solve, py::arg("model"));
    m.def("green_asymptotics_check", &green_asymptotics_check, py::arg("solution"));

    py::class_<ModelGreenResult>(m, "ModelGreenResult")
        .def_readonly("K", &ModelGreenResult::K)
        .def_readonly("F", &ModelGreenResult::F)
        .def_readonly("a", &ModelGreenResult::a)
        .def_readonly("R", &ModelGreenResult::R)
        .def_readonly("n", &ModelGreenResult::n)
        .def_readonly("b", &ModelGreenResult::b)
        .def_readonly("residual", &ModelGreenResult::residual)
        .def_readonly("asymptote", &ModelGreenResult::asymptote)
        .def("eval", &ModelGreenResult::eval, py::arg("radius"))
        .def("deriv", &ModelGreenResult::deriv, py::arg("radius"));
    m.def("model_green", &model_green, py::arg("K"), py::arg("F"), py::arg("a"),
          py::arg("R"), py::arg("n"),
          "radial Green profile of -Lap + F on the curvature-K space form");

    py::class_<SpectralResult>(m, "SpectralResult")
        .def_readonly("lambda1", &SpectralResult::lambda1)
        .def_readonly("lambda1_grid", &SpectralResult::lambda1_grid)
        .def_readonly("lambda1_coarse", &SpectralResult::lambda1_coarse)
        .def_readonly("fiber_mode_gap", &SpectralResult::fiber_mode_gap)
        .def_readonly("grid", &SpectralResult::grid)
        .def_readonly("r", &SpectralResult::r)
        .def_readonly("psi", &SpectralResult::psi)
        .def("psi_at", [](const SpectralResult& s, double r) { return s.psi_fn(r); },
             py::arg("r"))
        .def("dpsi_at", [](const SpectralResult& s, double r) { return s.dpsi_fn(r); },
             py::arg("r"));
    m.def("lambda1_radial", &lambda1_radial, py::arg("model"), py::arg("gamma"),
          py::arg("grid") = 8192,
          "smallest eigenvalue of -gamma Lap + Ric_min on radial functions");
    m.def("rayleigh_quotient", &rayleigh_quotient, py::arg("model"), py::arg("gamma"),
          py::arg("t"), py::arg("dt"),
          "quadratic-form quotient of a C^1 radial test function");

    py::class_<RadialCandidate>(m, "RadialCandidate")
        .def(py::init([](std::function<double(double)> u, std::function<double(double)> du,
                         std::function<double(double)> ddu) {
                 return RadialCandidate{std::move(u), std::move(du), std::move(ddu)};
             }),
             py::arg("u"), py::arg("du"), py::arg("ddu"))
        .def("u", [](const RadialCandidate& c, double r) { return c.u(r); }, py::arg("r"))
        .def("du", [](const RadialCandidate& c, double r) { return c.du(r); }, py::arg("r"))
        .def("ddu", [](const RadialCandidate& c, double r) { return c.ddu(r); },
             py::arg("r"));
    py::class_<DefectProfile>(m, "DefectProfile")
        .def_readonly("r", &DefectProfile::r)
        .def_readonly("defect", &DefectProfile::defect)
        .def_readonly("defect_over_u", &DefectProfile::defect_over_u)
        .def_readonly("min", &DefectProfile::min)
        .def_readonly("argmin", &DefectProfile::argmin)
        .def_readonly("min_over_u", &DefectProfile::min_over_u)
        .def_readonly("argmin_over_u", &DefectProfile::argmin_over_u)
        .def("nonnegative", &DefectProfile::nonnegative, py::arg("tol") = 0.0);
    m.def("supersolution_defect", &supersolution_defect, py::arg("model"), py::arg("gamma"),
          py::arg("lam"), py::arg("epsilon"), py::arg("candidate"), py::arg("r_lo"),
          py::arg("r_hi"), py::arg("grid") = 4096,
          "pointwise -gamma Lap u + Ric_min u - (lam - epsilon) u");

    py::enum_<TunnelTopology>(m, "TunnelTopology")
        .value("ConnectedSum", TunnelTopology::ConnectedSum)
        .value("Handle", TunnelTopology::Handle);
    py::class_<TunnelContext>(m, "TunnelContext")
        .def_static("connected_sum", &TunnelContext::connected_sum, py::arg("left"),
                    py::arg("right"))
        .def_static("handle", &TunnelContext::handle, py::arg("model"))
        .def("topology", &TunnelContext::topology)
        .def("params", &TunnelContext::params, py::return_value_policy::copy)
        .def("green", &TunnelContext::green, py::arg("side"),
             py::return_value_policy::reference_internal)
        .def("basepoint", &TunnelContext::basepoint, py::arg("side"))
        .def("chart_span", &TunnelContext::chart_span, py::arg("side"))
        .def("separation", &TunnelContext::separation)
        .def("r0_max", &TunnelContext::r0_max);

    py::class_<BlendedData>(m, "BlendedData")
        .def_readonly("r0", &BlendedData::r0)
        .def("beta", [](const BlendedData& b, double r) { return b.beta(r); }, py::arg("r"))
        .def("dbeta", [](const BlendedData& b, double r) { return b.dbeta(r); },
             py::arg("r"))
        .def("ddbeta", [](const BlendedData& b, double r) { return b.ddbeta(r); },
             py::arg("r"))
        .def("wtilde", [](const BlendedData& b, double r) { return b.wtilde(r); },
             py::arg("r"))
        .def("dwtilde", [](const BlendedData& b, double r) { return b.dwtilde(r); },
             py::arg("r"))
        .def("ddwtilde", [](const BlendedData& b, double r) { return b.ddwtilde(r); },
             py::arg("r"));
    m.def("blend_profiles", &blend_profiles, py::arg("context"), py::arg("r0"));
    m.def("blend_asymptotics", &blend_asymptotics, py::arg("context"), py::arg("k_lo") = 4,
          py::arg("k_hi") = 10,
          "decay rates of the six blend errors across dyadic neck scales");

    py::class_<InterfaceReport>(m, "InterfaceReport")
        .def_readonly("phi_gap", &InterfaceReport::phi_gap)
        .def_readonly("u_gap", &InterfaceReport::u_gap)
        .def_readonly("worst", &InterfaceReport::worst);
    py::class_<TunnelAssembly>(m, "TunnelAssembly")
        .def_readonly("r0", &TunnelAssembly::r0)
        .def_readonly("topology", &TunnelAssembly::topology)
        .def_readonly("params", &TunnelAssembly::params)
        .def_readonly("interface", &TunnelAssembly::interface)
        .def_readonly("assembled", &TunnelAssembly::assembled)
        .def_readonly("candidate", &TunnelAssembly::candidate)
        .def("Phi", [](const TunnelAssembly& a, double r) { return a.Phi(r); }, py::arg("r"),
             "tunnel warp, |r| <= r0")
        .def("u", [](const TunnelAssembly& a, double r) { return a.u(r); }, py::arg("r"),
             "tunnel candidate, |r| <= r0");
    m.def("assemble_tunnel",
          py::overload_cast<const TunnelContext&, double, const NeckProfile&>(
              &assemble_tunnel),
          py::arg("context"), py::arg("r0"), py::arg("neck"));
    m.def("assemble_tunnel",
          py::overload_cast<const TunnelContext&, double>(&assemble_tunnel),
          py::arg("context"), py::arg("r0"));

    py::class_<RegionDefectReport>(m, "RegionDefectReport")
        .def_readonly("core", &RegionDefectReport::core)
        .def_readonly("band", &RegionDefectReport::band)
        .def_readonly("min", &RegionDefectReport::min)
        .def_readonly("argmin", &RegionDefectReport::argmin)
        .def_readonly("r", &RegionDefectReport::r)
        .def_readonly("lead", &RegionDefectReport::lead)
        .def_readonly("dev_slope", &RegionDefectReport::dev_slope)
        .def_readonly("dev_ratio", &RegionDefectReport::dev_ratio)
        .def("nonnegative", &RegionDefectReport::nonnegative, py::arg("tol") = 0.0);
    m.def("region_defect_scan", &region_defect_scan, py::arg("assembly"),
          py::arg("grid") = 4096);

    py::class_<R0SearchResult>(m, "R0SearchResult")
        .def_readonly("r0_star", &R0SearchResult::r0_star)
        .def_readonly("tested", &R0SearchResult::tested)
        .def_readonly("min_defect", &R0SearchResult::min_defect)
        .def_readonly("admissible", &R0SearchResult::admissible);
    m.def("r0_scan", &r0_scan, py::arg("context"), py::arg("neck"),
          "try every dyadic neck scale; empty admissible set is not an error");
    m.def("r0_search", &r0_search, py::arg("context"), py::arg("neck"),
          "largest admissible neck scale, or NotAdmissible");

    m.def(
        "run_experiment_json",
        [](const std::string& config_json) {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(config_json);
            } catch (const nlohmann::json::parse_error& e) {
                throw ConfigError("config: " + std::string(e.what()));
            }
            const RunReport rep = run_experiment(config_from_json(j));
            return report_to_json(rep).dump();
        },
        py::arg("config_json"),
        "full experiment runner: takes a config JSON string (an 'experiment' key "
        "selects the kind), writes artifacts, returns the report as a JSON string");
    m.def("preset_config_json", [](const std::string& name) {
        return config_to_json(preset_config(name)).dump();
    });
    m.def("preset_names", &preset_names);
    m.def("worker_count", &worker_count);
}
