#pragma once

#include "spectun/config.hpp"
#include "spectun/model.hpp"
#include "spectun/report.hpp"

namespace spectun {

/// Build the manifold a ModelSpec describes. `want_basepoints` (0, 1 or 2)
/// resolves an empty basepoint list to the chart poles; -1 keeps the list as
/// given. Impossible requests (marks on a poleless model, wrong count) are
/// ConfigErrors.
ModelManifold make_model(const ModelSpec& spec, const Params& p, int want_basepoints = -1);

/// Worker-pool width for sweep experiments: SPECTUN_WORKERS when set (a
/// positive integer), otherwise the hardware concurrency.
int worker_count();

/// Dispatch one configured run: compute, write the CSV artifacts and
/// report.json under the config's output directory, and return the report.
/// Checks that fail are reported, not thrown; configuration problems
/// (including impossible model setups) throw ConfigError.
RunReport run_experiment(const ExperimentConfig& c);

}  // namespace spectun
