#include "cli/presets.hpp"

#include "phantom/errors.hpp"

namespace phantom::cli {

namespace {

SimConfig base(Environment env, int users) {
  SimConfig c = SimConfig::defaults_for(env);
  c.scenario.num_users = users;
  return c;
}

SimConfig with_mode(SimConfig c, PolicyMode mode) {
  c.policy.mode = mode;
  return c;
}

std::vector<ExperimentPreset> build_presets() {
  std::vector<ExperimentPreset> out;
  out.push_back({"fig4_indoor",
                 "indoor user-count sweep 50..500",
                 {{"indoor", base(Environment::indoor, 200), SweepAxis::num_users, user_sweep_values()}},
                 false});
  out.push_back({"fig4_outdoor",
                 "outdoor user-count sweep 50..500",
                 {{"outdoor", base(Environment::outdoor, 200), SweepAxis::num_users, user_sweep_values()}},
                 false});
  out.push_back({"fig5",
                 "dwell gate on/off, indoor and outdoor, U=200",
                 {{"indoor", base(Environment::indoor, 200), SweepAxis::dwell_toggle, {1.0, 0.0}},
                  {"outdoor", base(Environment::outdoor, 200), SweepAxis::dwell_toggle, {1.0, 0.0}}},
                 false});
  out.push_back({"fig6",
                 "hysteresis sweep, indoor, U=200",
                 {{"indoor", base(Environment::indoor, 200), SweepAxis::hysteresis, hysteresis_sweep_values()}},
                 false});
  out.push_back({"baseline_compare",
                 "proposed vs single-attachment baseline, indoor and outdoor, U=200",
                 {{"indoor_proposed", base(Environment::indoor, 200), std::nullopt, {}},
                  {"indoor_baseline", with_mode(base(Environment::indoor, 200), PolicyMode::baseline), std::nullopt, {}},
                  {"outdoor_proposed", base(Environment::outdoor, 200), std::nullopt, {}},
                  {"outdoor_baseline", with_mode(base(Environment::outdoor, 200), PolicyMode::baseline), std::nullopt,
                   {}}},
                 false});
  out.push_back({"analysis_demo", "closed-form analysis with default parameters", {}, true});
  return out;
}

}  // namespace

std::vector<double> user_sweep_values() { return {50, 100, 150, 200, 250, 300, 350, 400, 450, 500}; }

std::vector<double> hysteresis_sweep_values() { return {0.0, 0.05, 0.1, 0.2, 0.4}; }

const std::vector<ExperimentPreset>& presets() {
  static const std::vector<ExperimentPreset> all = build_presets();
  return all;
}

const ExperimentPreset& find_preset(const std::string& name) {
  for (const ExperimentPreset& p : presets()) {
    if (p.name == name) return p;
  }
  std::string known;
  for (const ExperimentPreset& p : presets()) known += (known.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
}

}  // namespace phantom::cli
