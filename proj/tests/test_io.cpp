#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "spectun/config.hpp"
#include "spectun/errors.hpp"
#include "spectun/profile_io.hpp"
#include "spectun/report.hpp"

using namespace spectun;
using nlohmann::json;

namespace {
constexpr double kPi = 3.14159265358979323846;

#ifndef SPECTUN_SOURCE_DIR
#define SPECTUN_SOURCE_DIR "."
#endif
}  // namespace

TEST_CASE("warp family records rebuild exact profiles") {
    const json rec = {{"family", "sphere"}, {"curvature", 2.0}};
    const WarpProfile w = warp_from_json(rec);
    CHECK(w.phi(0.3) == doctest::Approx(std::sin(std::sqrt(2.0) * 0.3) / std::sqrt(2.0))
                            .epsilon(1e-15));

    CHECK_THROWS_AS(warp_from_json({{"family", "sphere"}, {"curvature", -1.0}}),
                    ConfigError);
    CHECK_THROWS_AS(warp_from_json({{"family", "sphere"}, {"radius", 1.0}}), ConfigError);
    CHECK_THROWS_AS(warp_from_json({{"family", "klein bottle"}}), ConfigError);
}

TEST_CASE("sampled warp tables round-trip with interpolation accuracy") {
    const WarpProfile w = WarpProfile::warped_circle(2 * kPi, 0.3);
    const json rec = warp_to_json(w, 1025);
    const WarpProfile back = warp_from_json(rec);
    CHECK(back.is_circle());
    CHECK(back.length() == doctest::Approx(2 * kPi).epsilon(1e-12));
    for (double r : {0.1, 1.0, 3.0, 6.0})
        CHECK(back.phi(r) == doctest::Approx(w.phi(r)).epsilon(1e-8));
}

TEST_CASE("neck records: canonical, sampled, and malformed") {
    const NeckProfile canon = neck_from_json({{"family", "canonical"}});
    CHECK(canon.f0() == doctest::Approx(0.33445399770997536).epsilon(1e-12));

    json sampled = {{"family", "sampled"}};
    std::vector<double> x, f;
    const NeckProfile ref = NeckProfile::canonical();
    for (int i = 0; i <= 600; ++i) {
        x.push_back(2.0 * i / 600.0);
        f.push_back(ref.f(x.back()));
    }
    sampled["x"] = x;
    sampled["f"] = f;
    const NeckProfile reread = neck_from_json(sampled);
    CHECK(reread.is_sampled());
    CHECK(reread.f(0.25) == doctest::Approx(ref.f(0.25)).epsilon(1e-8));

    CHECK_THROWS_AS(neck_from_json({{"family", "canonical"}, {"extra", 1}}), ConfigError);
    CHECK_THROWS_AS(neck_from_json({{"family", "sampled"}, {"x", x}}), ConfigError);
}

TEST_CASE("config parsing is strict about keys, types, and ranges") {
    const ExperimentConfig base = default_config(ExperimentKind::TunnelBuild);
    CHECK_THROWS_AS(merge_config(base, {{"grid", 17.5}}), ConfigError);
    CHECK_THROWS_AS(merge_config(base, {{"grid", 8}}), ConfigError);
    CHECK_THROWS_AS(merge_config(base, {{"gird", 1024}}), ConfigError);
    CHECK_THROWS_AS(merge_config(base, {{"topology", "mobius"}}), ConfigError);
    CHECK_THROWS_AS(merge_config(base, {{"r0", 1.5}}), ConfigError);
    CHECK_THROWS_AS(merge_config(base, {{"params", {{"n", 2}}}}), ConfigError);
    CHECK_THROWS_AS(merge_config(base, {{"model", {{"kind", "dodecahedron"}}}}),
                    ConfigError);
    // radius belongs to the flat/hyperbolic caps, not the sphere record
    CHECK_THROWS_AS(
        merge_config(base, {{"model", {{"kind", "sphere"}, {"radius", 2.0}}}}),
        ConfigError);
    CHECK_THROWS_AS(merge_config(base, {{"experiment", "lambda1"}}), ConfigError);

    const ExperimentConfig ok = merge_config(
        base, {{"grid", 512}, {"params", {{"gamma", 2.5}}}, {"out", "elsewhere"}});
    CHECK(ok.grid == 512);
    CHECK(ok.params.gamma == 2.5);
    CHECK(ok.params.n == 3);
    CHECK(ok.out_dir == "elsewhere");
}

TEST_CASE("naming a model kind resets that family's defaults") {
    ExperimentConfig base = default_config(ExperimentKind::Lambda1);
    base.model.kind = "warped-circle";
    base.model.amplitude = 0.7;
    const ExperimentConfig fresh = merge_config(base, {{"model", {{"kind", "sphere"}}}});
    CHECK(fresh.model.kind == "sphere");
    CHECK(fresh.model.curvature == 1.0);
    const ExperimentConfig kept =
        merge_config(base, {{"model", {{"amplitude", 0.5}}}});
    CHECK(kept.model.kind == "warped-circle");
    CHECK(kept.model.amplitude == 0.5);
}

TEST_CASE("config echo round-trips exactly") {
    for (const auto& name : preset_names()) {
        const ExperimentConfig c = preset_config(name);
        const json echo = config_to_json(c);
        const ExperimentConfig back = config_from_json(echo);
        CHECK(config_to_json(back) == echo);
    }
}

TEST_CASE("shipped preset files match the built-in presets") {
    for (const auto& name : preset_names()) {
        const std::string path =
            std::string(SPECTUN_SOURCE_DIR) + "/presets/" + name + ".json";
        const ExperimentConfig file = load_config(path);
        CHECK(config_to_json(file) == config_to_json(preset_config(name)));
    }
    CHECK_THROWS_AS(preset_config("metatron"), ConfigError);
}

TEST_CASE("sweep grids resolve sorted, deduplicated, and clipped") {
    SweepSpec s;
    s.values = {2.5, 1.4, 2.5, 3.0};
    CHECK(s.resolved() == std::vector<double>{1.4, 2.5, 3.0});
    SweepSpec clipped;
    clipped.lo = 2.0;
    clipped.hi = 2.6;
    const auto grid = clipped.resolved();
    for (double g : grid) {
        CHECK(g >= 2.0);
        CHECK(g <= 2.6);
    }
    CHECK(!grid.empty());
}

TEST_CASE("reports round-trip through disk including non-finite values") {
    RunReport rep;
    rep.experiment = "neck-check";
    rep.config = config_to_json(default_config(ExperimentKind::NeckCheck));
    rep.add_check("alpha", 0.5, "<=", 1.0);
    rep.add_check("beta", std::numeric_limits<double>::infinity(), ">=", 0.5);
    rep.scalars["gap"] = std::numeric_limits<double>::quiet_NaN();
    rep.scalars["value"] = 1.25;
    rep.notes.push_back("skipped nothing");
    rep.artifacts.push_back("neck_profile.csv");

    const std::string path = "report_roundtrip_test.json";
    save_report(rep, path);
    const RunReport back = load_report(path);
    std::remove(path.c_str());

    CHECK(back.schema_version == kReportSchemaVersion);
    CHECK(back.experiment == rep.experiment);
    REQUIRE(back.checks.size() == 2);
    CHECK(back.checks[0].passed);
    CHECK(back.checks[1].passed);
    // infinities are clamped to the largest finite double so the file stays
    // valid JSON
    CHECK(back.checks[1].value == std::numeric_limits<double>::max());
    CHECK(std::isnan(back.scalars.at("gap")));
    CHECK(compare_baseline(back, rep).empty());
}

TEST_CASE("baseline comparison tolerates 1e-12 and flags 1e-3") {
    RunReport a;
    a.experiment = "lambda1";
    a.add_check("rayleigh-lower-bound", 0.1, ">=", -1e-8);
    a.scalars["lambda1"] = 2.0;
    RunReport b = a;

    CHECK(compare_baseline(a, b).empty());
    b.scalars["lambda1"] = 2.0 + 1e-12;
    CHECK(compare_baseline(a, b).empty());
    b.scalars["lambda1"] = 2.0 + 1e-3;
    const BaselineDiff diff = compare_baseline(a, b);
    REQUIRE(diff.flagged.size() == 1);
    CHECK(diff.flagged[0].key == "lambda1");

    // a check that flips from pass to fail is always flagged
    RunReport c = a;
    c.checks[0].value = -1.0;
    c.checks[0].passed = false;
    CHECK_FALSE(compare_baseline(c, a).empty());

    // missing keys are flagged both ways
    RunReport d = a;
    d.scalars["extra"] = 1.0;
    CHECK_FALSE(compare_baseline(d, a).empty());
    CHECK_FALSE(compare_baseline(a, d).empty());

    RunReport other = a;
    other.experiment = "neck-check";
    CHECK_THROWS_AS(compare_baseline(a, other), ConfigError);
    RunReport vnext = a;
    vnext.schema_version = kReportSchemaVersion + 1;
    CHECK_THROWS_AS(compare_baseline(a, vnext), ConfigError);
}

TEST_CASE("per-key tolerance overrides widen the comparison") {
    RunReport a;
    a.experiment = "lambda1";
    a.scalars["lambda1"] = 2.0;
    RunReport b = a;
    b.scalars["lambda1"] = 2.0 + 1e-5;
    CHECK_FALSE(compare_baseline(a, b).empty());
    CHECK(compare_baseline(a, b, {{"lambda1", 1e-4}}).empty());
}
