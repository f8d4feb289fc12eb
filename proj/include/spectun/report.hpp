#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace spectun {

inline constexpr int kReportSchemaVersion = 1;

/// One named pass/fail with its measured value and the bound it was held to;
/// `relation` is the comparison that defines a pass ("<=" or ">=").
struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation = "<=";

    /// Signed slack: how far the value clears the bound (negative = failing).
    double margin() const { return relation == ">=" ? value - threshold : threshold - value; }
};

/// The single structured record an experiment run persists: the resolved
/// config it ran, every check with its margin, the key scalars for regression
/// comparison, and the data files it wrote. Scalars are an ordered map so the
/// serialized form is stable.
struct RunReport {
    int schema_version = kReportSchemaVersion;
    std::string experiment;
    nlohmann::json config;
    std::vector<CheckResult> checks;
    std::map<std::string, double> scalars;
    std::vector<std::string> artifacts;
    std::vector<std::string> notes;  ///< free-form diagnostics, not compared
    double wall_seconds = 0.0;

    bool all_passed() const;
    const CheckResult* find(const std::string& name) const;  ///< nullptr when absent

    void add_check(const std::string& name, double value, const std::string& relation,
                   double threshold);
    /// For yes/no outcomes without a numeric margin (value 1 = yes).
    void add_flag(const std::string& name, bool ok);
};

nlohmann::json report_to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::json& j);  ///< ConfigError on malformed input
void save_report(const RunReport& r, const std::string& path);
RunReport load_report(const std::string& path);

/// Default absolute tolerance when comparing report scalars.
inline constexpr double kScalarTolerance = 1e-9;

struct BaselineDiff {
    struct Entry {
        std::string key;
        double got = 0.0;
        double want = 0.0;
        double tol = 0.0;
        std::string note;
    };
    std::vector<Entry> flagged;

    bool empty() const { return flagged.empty(); }
    std::string summary() const;
};

/// Scalar-by-scalar regression diff. Every scalar key present on either side
/// is compared with the per-key tolerance (default kScalarTolerance); check
/// outcomes must agree exactly. Wall clock and artifact paths never count.
/// Throws ConfigError when the schema versions or experiments differ.
BaselineDiff compare_baseline(const RunReport& report, const RunReport& baseline,
                              const std::map<std::string, double>& tolerances = {});

}  // namespace spectun
