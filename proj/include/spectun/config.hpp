#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spectun/params.hpp"

namespace spectun {

/// The experiment kinds the runner dispatches on; names match the CLI
/// subcommands (kebab case).
enum class ExperimentKind {
    ToyIdentity,
    NeckCheck,
    GreenSolve,
    TunnelBuild,
    DefectScan,
    Lambda1,
    ThresholdScan,
    Asymptotics,
};

std::string kind_name(ExperimentKind k);
ExperimentKind kind_from_name(const std::string& name);  ///< ConfigError on unknown

/// Ambient manifold description: a named builtin family or a profile file.
/// Numeric knobs default per family (see config_defaults in the README).
/// Basepoints left empty are resolved to the chart poles the experiment
/// needs (first pole for one mark, both poles for two).
struct ModelSpec {
    std::string kind = "sphere";  ///< euclidean | sphere | hyperbolic-cap | cylinder | warped-circle | profile-file
    double curvature = 1.0;       ///< sphere > 0, hyperbolic-cap < 0
    double radius = 1.0;          ///< chart radius of the noncompact caps
    double length = 6.283185307179586;  ///< circle circumference
    double amplitude = 0.3;       ///< warped-circle modulation, |A| < 1
    std::string path;             ///< profile-file record
    std::vector<double> basepoints;
};

/// Neck profile selection: the built-in canonical profile or a profile file.
struct NeckSpec {
    std::string kind = "canonical";  ///< canonical | file
    std::string path;
};

/// Gamma sweep for the threshold scan. An explicit `values` list wins;
/// otherwise the default grid is clipped to [lo, hi].
struct SweepSpec {
    double lo = 1.2;
    double hi = 4.0;
    std::vector<double> values;
    /// Sorted and deduplicated; may come back empty when the range holds no
    /// grid points (the scan runner rejects that).
    std::vector<double> resolved() const;
};

/// One experiment run, fully resolved: every knob has a concrete value and
/// config_to_json echoes exactly what ran. Parsing is strict: unknown keys,
/// wrong types, and out-of-range values all raise ConfigError.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::ToyIdentity;
    Params params;
    ModelSpec model;
    std::optional<ModelSpec> model2;  ///< second side of a connected sum
    std::string topology = "connected-sum";  ///< or "handle"
    NeckSpec neck;
    int grid = 4096;        ///< pointwise scans and CSV sampling
    int eig_grid = 8192;    ///< Sturm-Liouville cells
    double r0 = 0.0;        ///< fixed neck scale; 0 means search
    SweepSpec sweep;
    int k_lo = 4, k_hi = 10;  ///< dyadic range of the blend-asymptotics run
    int rq_samples = 100;     ///< randomized Rayleigh-quotient probes
    std::uint64_t seed = 24601;
    std::string out_dir = "out";
    bool quiet = false;
};

/// Defaults for a kind before any file is applied (the asymptotics kind picks
/// epsilon = 1 so the full dyadic range clears the neck-scale ceiling).
ExperimentConfig default_config(ExperimentKind kind);

/// Apply a (partial) config object over a base, strictly. An 'experiment'
/// key in the overlay must match the base kind.
ExperimentConfig merge_config(ExperimentConfig base, const nlohmann::json& overlay);

ExperimentConfig config_from_json(const nlohmann::json& j);  ///< needs 'experiment'
ExperimentConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& c);

/// Named scenario presets: toy, dumbbell, handle, sharpness.
ExperimentConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace spectun
