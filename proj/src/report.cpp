#include "spectun/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "spectun/errors.hpp"

namespace spectun {

using nlohmann::json;

bool RunReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.passed; });
}

const CheckResult* RunReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

void RunReport::add_check(const std::string& name, double value,
                          const std::string& relation, double threshold) {
    CheckResult c;
    c.name = name;
    c.value = value;
    c.threshold = threshold;
    c.relation = relation;
    // NaN always fails; infinities go through the comparison (an exactly-zero
    // decay quantity reports slope +inf, a legitimate pass).
    c.passed = !std::isnan(value) &&
               (relation == ">=" ? value >= threshold : value <= threshold);
    checks.push_back(std::move(c));
}

void RunReport::add_flag(const std::string& name, bool ok) {
    add_check(name, ok ? 1.0 : 0.0, ">=", 1.0);
}

namespace {

// JSON has no literals for non-finite numbers: NaN round-trips as null and
// infinities as the largest finite double, preserving pass/fail semantics.
json jnum(double x) {
    if (std::isnan(x)) return nullptr;
    if (std::isinf(x)) return x > 0 ? 1.7976931348623157e308 : -1.7976931348623157e308;
    return x;
}

double dnum(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return j.get<double>();
}

}  // namespace

json report_to_json(const RunReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"value", jnum(c.value)},
                          {"threshold", jnum(c.threshold)},
                          {"relation", c.relation}});
    json scalars = json::object();
    for (const auto& [key, v] : r.scalars) scalars[key] = jnum(v);
    return {{"schema_version", r.schema_version},
            {"experiment", r.experiment},
            {"config", r.config},
            {"checks", checks},
            {"scalars", scalars},
            {"artifacts", r.artifacts},
            {"notes", r.notes},
            {"wall_seconds", r.wall_seconds},
            {"all_passed", r.all_passed()}};
}

RunReport report_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("report: top level must be a JSON object");
    RunReport r;
    try {
        r.schema_version = j.at("schema_version").get<int>();
        r.experiment = j.at("experiment").get<std::string>();
        if (j.contains("config")) r.config = j.at("config");
        for (const auto& cj : j.at("checks")) {
            CheckResult c;
            c.name = cj.at("name").get<std::string>();
            c.passed = cj.at("passed").get<bool>();
            c.value = dnum(cj.at("value"));
            c.threshold = dnum(cj.at("threshold"));
            c.relation = cj.at("relation").get<std::string>();
            r.checks.push_back(std::move(c));
        }
        for (const auto& item : j.at("scalars").items())
            r.scalars[item.key()] = dnum(item.value());
        if (j.contains("artifacts"))
            for (const auto& a : j.at("artifacts")) r.artifacts.push_back(a.get<std::string>());
        if (j.contains("notes"))
            for (const auto& a : j.at("notes")) r.notes.push_back(a.get<std::string>());
        if (j.contains("wall_seconds")) r.wall_seconds = j.at("wall_seconds").get<double>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("report: malformed record: ") + e.what());
    }
    return r;
}

void save_report(const RunReport& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("save_report: cannot write '" + path + "'");
    out << report_to_json(r).dump(2) << '\n';
}

RunReport load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("load_report: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("load_report: malformed JSON in '") + path +
                          "': " + e.what());
    }
    return report_from_json(j);
}

std::string BaselineDiff::summary() const {
    if (flagged.empty()) return "reports agree within tolerance";
    std::ostringstream out;
    out << flagged.size() << " difference" << (flagged.size() == 1 ? "" : "s") << ":";
    for (const auto& e : flagged) {
        out << "\n  " << e.key << ": ";
        if (!e.note.empty()) {
            out << e.note;
        } else {
            out.precision(17);
            out << e.got << " vs " << e.want << " (|diff| = " << std::abs(e.got - e.want)
                << " > " << e.tol << ")";
        }
    }
    return out.str();
}

BaselineDiff compare_baseline(const RunReport& report, const RunReport& baseline,
                              const std::map<std::string, double>& tolerances) {
    if (report.schema_version != baseline.schema_version)
        throw ConfigError("compare_baseline: schema version mismatch (" +
                          std::to_string(report.schema_version) + " vs " +
                          std::to_string(baseline.schema_version) + ")");
    if (report.experiment != baseline.experiment)
        throw ConfigError("compare_baseline: experiments differ ('" + report.experiment +
                          "' vs '" + baseline.experiment + "')");

    BaselineDiff diff;
    auto tol_for = [&](const std::string& key) {
        auto it = tolerances.find(key);
        return it == tolerances.end() ? kScalarTolerance : it->second;
    };

    for (const auto& [key, got] : report.scalars) {
        auto it = baseline.scalars.find(key);
        if (it == baseline.scalars.end()) {
            diff.flagged.push_back({key, got, 0.0, 0.0, "missing from the baseline"});
            continue;
        }
        const double want = it->second;
        const bool both_nan = std::isnan(got) && std::isnan(want);
        if (!both_nan && !(std::abs(got - want) <= tol_for(key)))
            diff.flagged.push_back({key, got, want, tol_for(key), ""});
    }
    for (const auto& [key, want] : baseline.scalars)
        if (!report.scalars.count(key))
            diff.flagged.push_back({key, 0.0, want, 0.0, "missing from the report"});

    for (const auto& c : report.checks) {
        const CheckResult* b = baseline.find(c.name);
        if (!b) {
            diff.flagged.push_back({"check:" + c.name, 0, 0, 0, "missing from the baseline"});
        } else if (b->passed != c.passed) {
            diff.flagged.push_back({"check:" + c.name, c.passed ? 1.0 : 0.0,
                                    b->passed ? 1.0 : 0.0, 0.0,
                                    c.passed ? "now passes, baseline failed"
                                             : "now fails, baseline passed"});
        }
    }
    for (const auto& c : baseline.checks)
        if (!report.find(c.name))
            diff.flagged.push_back({"check:" + c.name, 0, 0, 0, "missing from the report"});

    return diff;
}

}  // namespace spectun
