#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spectun/config.hpp"
#include "spectun/errors.hpp"
#include "spectun/experiments.hpp"
#include "spectun/report.hpp"

namespace {

using nlohmann::json;
using namespace spectun;

struct Opts {
    std::string config, out, preset;
    int grid = -1;
    bool quiet = false;
};

void add_common_flags(CLI::App& sub, Opts& o) {
    sub.add_option("--config", o.config, "JSON config file applied over the preset/defaults");
    sub.add_option("--out", o.out, "output directory for report.json and CSV artifacts");
    sub.add_option("--preset", o.preset, "scenario preset: toy, dumbbell, handle, sharpness");
    sub.add_option("--grid", o.grid, "pointwise scan grid");
    sub.add_flag("--quiet", o.quiet, "print failing checks only");
}

int print_report(const RunReport& rep, bool quiet, const std::string& out_dir) {
    int failed = 0;
    for (const auto& c : rep.checks) {
        if (!c.passed) ++failed;
        if (quiet && c.passed) continue;
        std::printf("[%s] %s: %.10g %s %.10g\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                    c.value, c.relation.c_str(), c.threshold);
    }
    if (!quiet || failed > 0)
        for (const auto& n : rep.notes) std::printf("note: %s\n", n.c_str());
    const std::string report_path = (std::filesystem::path(out_dir) / "report.json").string();
    if (failed == 0)
        std::printf("%s: %zu checks passed (%s)\n", rep.experiment.c_str(),
                    rep.checks.size(), report_path.c_str());
    else
        std::printf("%s: %d of %zu checks FAILED (%s)\n", rep.experiment.c_str(), failed,
                    rep.checks.size(), report_path.c_str());
    return failed == 0 ? 0 : 1;
}

int run_kind(ExperimentKind kind, const Opts& o) {
    ExperimentConfig cfg = o.preset.empty() ? default_config(kind) : preset_config(o.preset);
    cfg.kind = kind;

    json overlay = json::object();
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) throw ConfigError("cannot open config file '" + o.config + "'");
        try {
            overlay = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError("config: " + std::string(e.what()));
        }
    }
    if (o.grid >= 0) overlay["grid"] = o.grid;
    if (!o.out.empty()) overlay["out"] = o.out;
    if (o.quiet) overlay["quiet"] = true;
    cfg = merge_config(std::move(cfg), overlay);

    const RunReport rep = run_experiment(cfg);
    return print_report(rep, cfg.quiet, cfg.out_dir);
}

int run_compare(const std::string& report_path, const std::string& baseline_path) {
    const RunReport rep = load_report(report_path);
    const RunReport base = load_report(baseline_path);
    const BaselineDiff diff = compare_baseline(rep, base);
    if (diff.empty()) {
        std::printf("reports agree within tolerance (%zu checks, %zu scalars)\n",
                    rep.checks.size(), rep.scalars.size());
        return 0;
    }
    std::printf("%s\n", diff.summary().c_str());
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"warped-product surgery toolkit: build tunnels between model manifolds "
                 "and certify the spectral curvature bound survives"};
    app.require_subcommand(1);

    const std::pair<ExperimentKind, const char*> kinds[] = {
        {ExperimentKind::ToyIdentity, "closed-form threshold identity on a neck profile"},
        {ExperimentKind::NeckCheck, "neck profile constraints, bending margin, flatness"},
        {ExperimentKind::GreenSolve, "ambient Green solution with decay-rate checks"},
        {ExperimentKind::TunnelBuild,
         "assemble the surgered manifold and certify its spectral bound"},
        {ExperimentKind::DefectScan, "pointwise supersolution defect across the tunnel"},
        {ExperimentKind::Lambda1, "ground state of a model manifold, with Rayleigh probes"},
        {ExperimentKind::ThresholdScan, "gamma sweep locating the admissibility flip"},
        {ExperimentKind::Asymptotics, "blend-error decay across dyadic neck scales"},
    };
    Opts opts;
    std::vector<std::pair<CLI::App*, ExperimentKind>> subs;
    for (const auto& [kind, desc] : kinds) {
        CLI::App* sub = app.add_subcommand(kind_name(kind), desc);
        add_common_flags(*sub, opts);
        subs.emplace_back(sub, kind);
    }
    std::string report_path, baseline_path;
    CLI::App* cmp = app.add_subcommand("compare", "diff two run reports key by key");
    cmp->add_option("report", report_path, "report.json of the run under test")->required();
    cmp->add_option("baseline", baseline_path, "report.json to compare against")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmp->parsed()) return run_compare(report_path, baseline_path);
        for (const auto& [sub, kind] : subs)
            if (sub->parsed()) return run_kind(kind, opts);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
