#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracfv/config.hpp"

namespace fracfv {

using Overrides = std::map<std::string, std::string>;

struct ExperimentInfo {
    std::string name;
    std::string description;
};

/// Registered validation experiments, each a desk-scale version of one study
/// (convergence orders, exact-solution agreement, entropy decay, tail laws,
/// splitting consistency). Paper-scale parameters stay reachable via overrides.
const std::vector<ExperimentInfo>& experiment_registry();

/// Runs a registered experiment; writes CSV artifacts and summary.json into
/// out_dir and returns the summary (fitted slopes, errors, pass/fail against
/// the pinned thresholds). Unknown names raise ConfigError listing the registry.
nlohmann::json run_experiment(const std::string& name, const Overrides& overrides,
                              const std::filesystem::path& out_dir, int threads);

/// Executes a single validated RunConfig: steps to t_final or to the steady
/// state, emits the final field, snapshots, and the diagnostics series, and
/// returns a small summary.
nlohmann::json run_single(const RunConfig& cfg, const std::filesystem::path& out_dir);

} // namespace fracfv
