#include "spectun/profile_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <vector>

#include "spectun/errors.hpp"

namespace spectun {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

const json& expect_object(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected a JSON object");
    return j;
}

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
    for (const auto& item : j.items())
        if (!allowed.count(item.key())) fail(where, "unknown key '" + item.key() + "'");
}

double number_at(const json& j, const std::string& key, double fallback,
                 const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) fail(where, "'" + key + "' must be a number");
    return j.at(key).get<double>();
}

std::vector<double> number_list(const json& j, const std::string& key,
                                const std::string& where) {
    if (!j.contains(key)) fail(where, "missing required array '" + key + "'");
    const json& arr = j.at(key);
    if (!arr.is_array() || arr.empty()) fail(where, "'" + key + "' must be a nonempty array");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) fail(where, "'" + key + "' must contain numbers only");
        out.push_back(v.get<double>());
    }
    return out;
}

std::string string_at(const json& j, const std::string& key, const std::string& fallback,
                      const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_string()) fail(where, "'" + key + "' must be a string");
    return j.at(key).get<std::string>();
}

EndKind end_kind(const std::string& tag, const std::string& where) {
    if (tag == "pole") return EndKind::Pole;
    if (tag == "boundary") return EndKind::Boundary;
    fail(where, "end kind must be 'pole' or 'boundary', got '" + tag + "'");
}

WarpDomain domain_from_json(const json& j, const std::string& where) {
    expect_object(j, where);
    const std::string kind = string_at(j, "kind", "", where);
    if (kind == "interval") {
        check_keys(j, {"kind", "r_min", "r_max", "left", "right"}, where);
        Interval iv;
        iv.r_min = number_at(j, "r_min", 0.0, where);
        iv.r_max = number_at(j, "r_max", 1.0, where);
        if (!(iv.r_max > iv.r_min)) fail(where, "r_max must exceed r_min");
        iv.left = end_kind(string_at(j, "left", "pole", where), where);
        iv.right = end_kind(string_at(j, "right", "boundary", where), where);
        return iv;
    }
    if (kind == "circle") {
        check_keys(j, {"kind", "length"}, where);
        Circle c;
        c.length = number_at(j, "length", 1.0, where);
        if (!(c.length > 0.0)) fail(where, "circle length must be positive");
        return c;
    }
    fail(where, "domain kind must be 'interval' or 'circle'");
}

json domain_to_json(const WarpDomain& dom) {
    if (const auto* iv = std::get_if<Interval>(&dom)) {
        auto tag = [](EndKind k) { return k == EndKind::Pole ? "pole" : "boundary"; };
        return {{"kind", "interval"},
                {"r_min", iv->r_min},
                {"r_max", iv->r_max},
                {"left", tag(iv->left)},
                {"right", tag(iv->right)}};
    }
    return {{"kind", "circle"}, {"length", std::get<Circle>(dom).length}};
}

json read_json_file(const std::string& path, const std::string& where) {
    std::ifstream in(path);
    if (!in) fail(where, "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        fail(where, "malformed JSON in '" + path + "': " + e.what());
    }
    return j;
}

}  // namespace

WarpProfile warp_from_json(const json& record) {
    const std::string where = "warp profile";
    expect_object(record, where);
    const std::string family = string_at(record, "family", "", where);
    if (family == "euclidean") {
        check_keys(record, {"family", "radius"}, where);
        const double R = number_at(record, "radius", 1.0, where);
        if (!(R > 0.0)) fail(where, "radius must be positive");
        return WarpProfile::euclidean(R);
    }
    if (family == "sphere") {
        check_keys(record, {"family", "curvature"}, where);
        const double K = number_at(record, "curvature", 1.0, where);
        if (!(K > 0.0)) fail(where, "sphere curvature must be positive");
        return WarpProfile::sphere(K);
    }
    if (family == "hyperbolic-cap") {
        check_keys(record, {"family", "radius", "curvature"}, where);
        const double R = number_at(record, "radius", 1.0, where);
        const double K = number_at(record, "curvature", -1.0, where);
        if (!(R > 0.0)) fail(where, "radius must be positive");
        if (!(K < 0.0)) fail(where, "hyperbolic curvature must be negative");
        return WarpProfile::hyperbolic_cap(R, K);
    }
    if (family == "cylinder") {
        check_keys(record, {"family", "length"}, where);
        const double L = number_at(record, "length", 2.0 * 3.14159265358979323846, where);
        if (!(L > 0.0)) fail(where, "length must be positive");
        return WarpProfile::cylinder(L);
    }
    if (family == "warped-circle") {
        check_keys(record, {"family", "length", "amplitude"}, where);
        const double L = number_at(record, "length", 2.0 * 3.14159265358979323846, where);
        const double A = number_at(record, "amplitude", 0.3, where);
        if (!(L > 0.0)) fail(where, "length must be positive");
        if (!(std::abs(A) < 1.0)) fail(where, "amplitude must satisfy |A| < 1");
        return WarpProfile::warped_circle(L, A);
    }
    if (family == "sampled") {
        check_keys(record, {"family", "name", "domain", "r", "phi"}, where);
        if (!record.contains("domain")) fail(where, "sampled profiles need a 'domain'");
        WarpDomain dom = domain_from_json(record.at("domain"), where + " domain");
        auto r = number_list(record, "r", where);
        auto phi = number_list(record, "phi", where);
        if (r.size() != phi.size()) fail(where, "'r' and 'phi' must have equal length");
        return WarpProfile::from_samples(dom, string_at(record, "name", "sampled", where),
                                         std::move(r), std::move(phi));
    }
    fail(where, "unknown family '" + family + "'");
}

WarpProfile load_warp(const std::string& path) {
    return warp_from_json(read_json_file(path, "warp profile"));
}

json warp_to_json(const WarpProfile& w, int samples) {
    if (samples < 8) throw DomainError("warp_to_json: need at least 8 samples");
    std::vector<double> r(samples), phi(samples);
    const double a = w.r_min(), h = w.length() / (samples - 1);
    for (int i = 0; i < samples; ++i) {
        r[i] = a + i * h;
        phi[i] = w.phi(w.is_circle() ? w.wrap(r[i]) : r[i]);
    }
    return {{"family", "sampled"},
            {"name", w.name()},
            {"domain", domain_to_json(w.domain())},
            {"r", r},
            {"phi", phi}};
}

void save_warp(const WarpProfile& w, const std::string& path, int samples) {
    std::ofstream out(path);
    if (!out) throw ConfigError("save_warp: cannot write '" + path + "'");
    out << warp_to_json(w, samples).dump(2) << '\n';
}

NeckProfile neck_from_json(const json& record) {
    const std::string where = "neck profile";
    expect_object(record, where);
    const std::string family = string_at(record, "family", "canonical", where);
    if (family == "canonical") {
        check_keys(record, {"family"}, where);
        return NeckProfile::canonical();
    }
    if (family == "sampled") {
        check_keys(record, {"family", "x", "f"}, where);
        auto x = number_list(record, "x", where);
        auto f = number_list(record, "f", where);
        if (x.size() != f.size()) fail(where, "'x' and 'f' must have equal length");
        return NeckProfile::from_samples(std::move(x), std::move(f));
    }
    fail(where, "unknown family '" + family + "'");
}

NeckProfile load_neck(const std::string& path) {
    return neck_from_json(read_json_file(path, "neck profile"));
}

}  // namespace spectun
