#include "spectun/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "spectun/errors.hpp"

namespace spectun {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw ConfigError("config: " + what); }

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            fail("unknown key '" + item.key() + "' in " + where);
}

const json& object_at(const json& j, const std::string& key) {
    if (!j.at(key).is_object()) fail("'" + key + "' must be an object");
    return j.at(key);
}

double number_field(const json& j, const std::string& key, double current) {
    if (!j.contains(key)) return current;
    if (!j.at(key).is_number()) fail("'" + key + "' must be a number");
    return j.at(key).get<double>();
}

int int_field(const json& j, const std::string& key, int current) {
    if (!j.contains(key)) return current;
    if (!j.at(key).is_number_integer()) fail("'" + key + "' must be an integer");
    return j.at(key).get<int>();
}

bool bool_field(const json& j, const std::string& key, bool current) {
    if (!j.contains(key)) return current;
    if (!j.at(key).is_boolean()) fail("'" + key + "' must be a boolean");
    return j.at(key).get<bool>();
}

std::string string_field(const json& j, const std::string& key, std::string current) {
    if (!j.contains(key)) return current;
    if (!j.at(key).is_string()) fail("'" + key + "' must be a string");
    return j.at(key).get<std::string>();
}

std::vector<double> number_array(const json& arr, const std::string& key) {
    if (!arr.is_array()) fail("'" + key + "' must be an array of numbers");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) fail("'" + key + "' must contain numbers only");
        out.push_back(v.get<double>());
    }
    return out;
}

ModelSpec default_model_spec(const std::string& kind) {
    ModelSpec spec;
    spec.kind = kind;
    if (kind == "hyperbolic-cap") spec.curvature = -1.0;
    return spec;
}

const std::set<std::string>& model_keys(const std::string& kind) {
    static const std::map<std::string, std::set<std::string>> table = {
        {"euclidean", {"kind", "radius", "basepoints"}},
        {"sphere", {"kind", "curvature", "basepoints"}},
        {"hyperbolic-cap", {"kind", "radius", "curvature", "basepoints"}},
        {"cylinder", {"kind", "length", "basepoints"}},
        {"warped-circle", {"kind", "length", "amplitude", "basepoints"}},
        {"profile-file", {"kind", "path", "basepoints"}},
    };
    auto it = table.find(kind);
    if (it == table.end())
        fail("unknown model kind '" + kind +
             "' (expected euclidean | sphere | hyperbolic-cap | cylinder | "
             "warped-circle | profile-file)");
    return it->second;
}

ModelSpec merge_model(ModelSpec base, const json& j, const std::string& where) {
    if (!j.is_object()) fail("'" + where + "' must be an object");
    // Naming a kind restates the model from that kind's defaults.
    std::string kind = string_field(j, "kind", base.kind);
    ModelSpec spec = (kind == base.kind) ? base : default_model_spec(kind);
    spec.kind = kind;
    check_keys(j, model_keys(kind), where);
    spec.curvature = number_field(j, "curvature", spec.curvature);
    spec.radius = number_field(j, "radius", spec.radius);
    spec.length = number_field(j, "length", spec.length);
    spec.amplitude = number_field(j, "amplitude", spec.amplitude);
    spec.path = string_field(j, "path", spec.path);
    if (j.contains("basepoints")) spec.basepoints = number_array(j.at("basepoints"), where + ".basepoints");

    if (kind == "sphere" && !(spec.curvature > 0.0)) fail(where + ": sphere curvature must be positive");
    if (kind == "hyperbolic-cap" && !(spec.curvature < 0.0))
        fail(where + ": hyperbolic-cap curvature must be negative");
    if ((kind == "euclidean" || kind == "hyperbolic-cap") && !(spec.radius > 0.0))
        fail(where + ": radius must be positive");
    if ((kind == "cylinder" || kind == "warped-circle") && !(spec.length > 0.0))
        fail(where + ": length must be positive");
    if (kind == "warped-circle" && !(std::abs(spec.amplitude) < 1.0))
        fail(where + ": amplitude must satisfy |A| < 1");
    if (kind == "profile-file" && spec.path.empty()) fail(where + ": profile-file needs a 'path'");
    if (spec.basepoints.size() > 2) fail(where + ": at most two basepoints");
    return spec;
}

json model_to_json(const ModelSpec& spec) {
    json j{{"kind", spec.kind}};
    if (spec.kind == "euclidean") j["radius"] = spec.radius;
    if (spec.kind == "sphere") j["curvature"] = spec.curvature;
    if (spec.kind == "hyperbolic-cap") {
        j["radius"] = spec.radius;
        j["curvature"] = spec.curvature;
    }
    if (spec.kind == "cylinder") j["length"] = spec.length;
    if (spec.kind == "warped-circle") {
        j["length"] = spec.length;
        j["amplitude"] = spec.amplitude;
    }
    if (spec.kind == "profile-file") j["path"] = spec.path;
    if (!spec.basepoints.empty()) j["basepoints"] = spec.basepoints;
    return j;
}

void validate(const ExperimentConfig& c) {
    try {
        c.params.validate();
    } catch (const Error& e) {
        fail(e.what());
    }
    if (c.grid < 64 || c.grid > (1 << 20)) fail("'grid' must lie in [64, 1048576]");
    if (c.eig_grid < 128 || c.eig_grid > (1 << 20)) fail("'eig_grid' must lie in [128, 1048576]");
    if (c.eig_grid % 2 != 0) fail("'eig_grid' must be even (half-resolution extrapolation)");
    if (!(c.r0 >= 0.0) || !std::isfinite(c.r0) || c.r0 >= 1.0)
        fail("'r0' must lie in [0, 1) (0 requests a search)");
    if (c.topology != "connected-sum" && c.topology != "handle")
        fail("'topology' must be 'connected-sum' or 'handle'");
    if (c.topology == "handle" && c.model2.has_value())
        fail("'model2' does not apply to the handle topology");
    if (c.neck.kind != "canonical" && c.neck.kind != "file")
        fail("neck 'kind' must be 'canonical' or 'file'");
    if (c.neck.kind == "file" && c.neck.path.empty()) fail("neck 'file' needs a 'path'");
    if (c.k_lo < 1 || c.k_hi > 40 || c.k_hi - c.k_lo < 5)
        fail("'k_lo'/'k_hi' must satisfy 1 <= k_lo, k_hi <= 40, k_hi - k_lo >= 5");
    if (c.rq_samples < 0 || c.rq_samples > 100000) fail("'rq_samples' must lie in [0, 100000]");
    if (!(c.sweep.lo > 0.0) || !(c.sweep.hi > c.sweep.lo)) fail("sweep needs 0 < lo < hi");
    for (double g : c.sweep.values)
        if (!(g > 0.0) || !std::isfinite(g)) fail("sweep 'values' must be positive numbers");
    if (c.out_dir.empty()) fail("'out' must not be empty");
}

}  // namespace

std::string kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::ToyIdentity: return "toy-identity";
        case ExperimentKind::NeckCheck: return "neck-check";
        case ExperimentKind::GreenSolve: return "green-solve";
        case ExperimentKind::TunnelBuild: return "tunnel-build";
        case ExperimentKind::DefectScan: return "defect-scan";
        case ExperimentKind::Lambda1: return "lambda1";
        case ExperimentKind::ThresholdScan: return "threshold-scan";
        case ExperimentKind::Asymptotics: return "asymptotics";
    }
    fail("invalid experiment kind");
}

ExperimentKind kind_from_name(const std::string& name) {
    static const std::map<std::string, ExperimentKind> table = {
        {"toy-identity", ExperimentKind::ToyIdentity},
        {"neck-check", ExperimentKind::NeckCheck},
        {"green-solve", ExperimentKind::GreenSolve},
        {"tunnel-build", ExperimentKind::TunnelBuild},
        {"defect-scan", ExperimentKind::DefectScan},
        {"lambda1", ExperimentKind::Lambda1},
        {"threshold-scan", ExperimentKind::ThresholdScan},
        {"asymptotics", ExperimentKind::Asymptotics},
    };
    auto it = table.find(name);
    if (it == table.end()) fail("unknown experiment '" + name + "'");
    return it->second;
}

std::vector<double> SweepSpec::resolved() const {
    std::vector<double> out = values;
    if (out.empty()) {
        for (double g : {1.2, 1.5, 1.9, 2.0, 2.1, 2.25, 2.5, 3.0, 4.0})
            if (g >= lo && g <= hi) out.push_back(g);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig c;
    c.kind = kind;
    // The dyadic range 2^-4 .. 2^-10 must clear the neck ceiling
    // 0.1 min{1, separation, epsilon}, so the asymptotics default is a slack
    // loss budget rather than the pipeline's 0.2.
    if (kind == ExperimentKind::Asymptotics) c.params.epsilon = 1.0;
    return c;
}

ExperimentConfig merge_config(ExperimentConfig base, const json& j) {
    if (!j.is_object()) fail("top level must be a JSON object");
    check_keys(j,
               {"experiment", "params", "model", "model2", "topology", "neck", "grid",
                "eig_grid", "r0", "sweep", "k_lo", "k_hi", "rq_samples", "seed", "out",
                "quiet"},
               "the top level");
    if (j.contains("experiment")) {
        const ExperimentKind k = kind_from_name(string_field(j, "experiment", ""));
        if (k != base.kind)
            fail("'experiment' (" + kind_name(k) + ") does not match the requested run (" +
                 kind_name(base.kind) + ")");
    }
    if (j.contains("params")) {
        const json& p = object_at(j, "params");
        check_keys(p, {"n", "gamma", "lambda", "epsilon"}, "'params'");
        base.params.n = int_field(p, "n", base.params.n);
        base.params.gamma = number_field(p, "gamma", base.params.gamma);
        base.params.lambda = number_field(p, "lambda", base.params.lambda);
        base.params.epsilon = number_field(p, "epsilon", base.params.epsilon);
    }
    if (j.contains("model")) base.model = merge_model(base.model, object_at(j, "model"), "'model'");
    if (j.contains("model2"))
        base.model2 = merge_model(base.model2.value_or(base.model), object_at(j, "model2"),
                                  "'model2'");
    base.topology = string_field(j, "topology", base.topology);
    if (j.contains("neck")) {
        const json& nj = object_at(j, "neck");
        check_keys(nj, {"kind", "path"}, "'neck'");
        base.neck.kind = string_field(nj, "kind", base.neck.kind);
        base.neck.path = string_field(nj, "path", base.neck.path);
    }
    base.grid = int_field(j, "grid", base.grid);
    base.eig_grid = int_field(j, "eig_grid", base.eig_grid);
    base.r0 = number_field(j, "r0", base.r0);
    if (j.contains("sweep")) {
        const json& sj = object_at(j, "sweep");
        check_keys(sj, {"lo", "hi", "values"}, "'sweep'");
        base.sweep.lo = number_field(sj, "lo", base.sweep.lo);
        base.sweep.hi = number_field(sj, "hi", base.sweep.hi);
        if (sj.contains("values")) base.sweep.values = number_array(sj.at("values"), "values");
    }
    base.k_lo = int_field(j, "k_lo", base.k_lo);
    base.k_hi = int_field(j, "k_hi", base.k_hi);
    base.rq_samples = int_field(j, "rq_samples", base.rq_samples);
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (s.is_number_unsigned()) {
            base.seed = s.get<std::uint64_t>();
        } else if (s.is_number_integer() && s.get<std::int64_t>() >= 0) {
            base.seed = static_cast<std::uint64_t>(s.get<std::int64_t>());
        } else {
            fail("'seed' must be a nonnegative integer");
        }
    }
    base.out_dir = string_field(j, "out", base.out_dir);
    base.quiet = bool_field(j, "quiet", base.quiet);
    validate(base);
    return base;
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) fail("top level must be a JSON object");
    if (!j.contains("experiment")) fail("missing required key 'experiment'");
    return merge_config(default_config(kind_from_name(string_field(j, "experiment", ""))), j);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        fail(std::string("malformed JSON in '") + path + "': " + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["experiment"] = kind_name(c.kind);
    j["params"] = {{"n", c.params.n},
                   {"gamma", c.params.gamma},
                   {"lambda", c.params.lambda},
                   {"epsilon", c.params.epsilon}};
    j["model"] = model_to_json(c.model);
    if (c.model2) j["model2"] = model_to_json(*c.model2);
    j["topology"] = c.topology;
    j["neck"] = c.neck.kind == "file" ? json{{"kind", "file"}, {"path", c.neck.path}}
                                      : json{{"kind", "canonical"}};
    j["grid"] = c.grid;
    j["eig_grid"] = c.eig_grid;
    j["r0"] = c.r0;
    j["sweep"] = {{"lo", c.sweep.lo}, {"hi", c.sweep.hi}, {"values", c.sweep.resolved()}};
    j["k_lo"] = c.k_lo;
    j["k_hi"] = c.k_hi;
    j["rq_samples"] = c.rq_samples;
    j["seed"] = c.seed;
    j["out"] = c.out_dir;
    j["quiet"] = c.quiet;
    return j;
}

ExperimentConfig preset_config(const std::string& name) {
    if (name == "toy") {
        ExperimentConfig c = default_config(ExperimentKind::ToyIdentity);
        c.out_dir = "out/toy";
        return c;
    }
    if (name == "dumbbell") {
        ExperimentConfig c = default_config(ExperimentKind::TunnelBuild);
        c.params = Params(3, 3.0, 2.0, 0.2);
        c.model = default_model_spec("sphere");
        c.model2 = c.model;
        c.topology = "connected-sum";
        c.eig_grid = 32768;  // the lambda1 slack needs the neck-scale potential resolved
        c.out_dir = "out/dumbbell";
        return c;
    }
    if (name == "handle") {
        ExperimentConfig c = default_config(ExperimentKind::TunnelBuild);
        c.params = Params(3, 3.0, 2.0, 0.2);
        c.model = default_model_spec("sphere");
        c.topology = "handle";
        c.eig_grid = 32768;
        c.out_dir = "out/handle";
        return c;
    }
    if (name == "sharpness") {
        ExperimentConfig c = default_config(ExperimentKind::ThresholdScan);
        c.params = Params(3, 3.0, 2.0, 0.2);
        c.model = default_model_spec("sphere");
        c.topology = "handle";
        c.out_dir = "out/sharpness";
        return c;
    }
    fail("unknown preset '" + name + "' (expected toy | dumbbell | handle | sharpness)");
}

std::vector<std::string> preset_names() { return {"toy", "dumbbell", "handle", "sharpness"}; }

}  // namespace spectun
