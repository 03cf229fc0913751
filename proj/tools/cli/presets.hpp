#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phantom/engine.hpp"

namespace phantom::cli {

/// One labelled run inside a preset: a plain run, or a sweep when `axis` is set.
struct PresetPart {
  std::string label;
  SimConfig config;
  std::optional<SweepAxis> axis;
  std::vector<double> values;
};

struct ExperimentPreset {
  std::string name;
  std::string description;
  /// Empty for analysis_demo, which evaluates the closed-form model only.
  std::vector<PresetPart> parts;
  bool analysis = false;
};

/// fig4_indoor, fig4_outdoor, fig5, fig6, baseline_compare, analysis_demo.
const std::vector<ExperimentPreset>& presets();

/// Throws ConfigError for an unknown name.
const ExperimentPreset& find_preset(const std::string& name);

/// Values of the user-count sweep.
std::vector<double> user_sweep_values();

/// Values of the hysteresis sweep.
std::vector<double> hysteresis_sweep_values();

}  // namespace phantom::cli
