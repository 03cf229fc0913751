#include "cli/app.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "cli/output.hpp"
#include "cli/presets.hpp"
#include "phantom/config.hpp"
#include "phantom/csv.hpp"
#include "phantom/errors.hpp"

namespace phantom::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::string out = "runs";
  bool trace = false;

  OutputOptions output() const { return {format == "tsv" ? '\t' : ',', trace}; }
};

SimConfig with_seed(SimConfig c, const std::optional<std::uint64_t>& seed) {
  if (seed) {
    c.seed = *seed;
    c.scenario.seed = *seed;
  }
  return c;
}

SweepAxis parse_axis(const std::string& s) {
  if (s == "num_users") return SweepAxis::num_users;
  if (s == "hysteresis") return SweepAxis::hysteresis;
  if (s == "dwell_toggle") return SweepAxis::dwell_toggle;
  throw ConfigError("unknown sweep axis '" + s + "'");
}

double parse_value(const std::string& s) {
  if (s == "on" || s == "true") return 1.0;
  if (s == "off" || s == "false") return 0.0;
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("bad sweep value '" + s + "'");
}

void print_summary(std::ostream& out, const MetricsReport& r) {
  out << "handovers mean=" << format_double(r.handovers.mean) << " std=" << format_double(r.handovers.std) << '\n'
      << "avg_handover_per_user mean=" << format_double(r.avg_handover_per_user.mean)
      << " std=" << format_double(r.avg_handover_per_user.std) << '\n';
  for (int k = 0; k < kEventKindCount; ++k) {
    out << to_string(static_cast<EventKind>(k)) << " mean=" << format_double(r.counts_by_kind[static_cast<size_t>(k)].mean)
        << '\n';
  }
  out << "occupancy S1=" << format_double(r.occupancy[0]) << " S2=" << format_double(r.occupancy[1])
      << " S3=" << format_double(r.occupancy[2]) << '\n';
}

void add_common(CLI::App* cmd, Common& common, bool outputs) {
  cmd->add_option("--format", common.format, "table format")->check(CLI::IsMember({"csv", "tsv"}));
  if (outputs) {
    cmd->add_option("--seed", common.seed, "override the config seed");
    cmd->add_option("--out", common.out, "root of run directories");
    cmd->add_flag("--trace", common.trace, "also write per-step state labels");
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phantom-cell HetNet handover simulator and analysis toolkit", "phantomho"};
  app.require_subcommand(1);
  Common common;
  std::string config_path;
  std::string preset_name;
  std::string axis_name;
  std::vector<std::string> values;
  bool csv = false;
  bool list = false;

  CLI::App* simulate = app.add_subcommand("simulate", "run replications of one config");
  simulate->add_option("config", config_path, "config file")->required();
  add_common(simulate, common, true);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run one config per axis value");
  sweep_cmd->add_option("config", config_path, "config file")->required();
  sweep_cmd->add_option("--axis", axis_name, "num_users, hysteresis or dwell_toggle")
      ->required()
      ->check(CLI::IsMember({"num_users", "hysteresis", "dwell_toggle"}));
  sweep_cmd->add_option("--values", values, "comma-separated values (on/off for dwell_toggle)")
      ->required()
      ->delimiter(',');
  add_common(sweep_cmd, common, true);

  CLI::App* analyze = app.add_subcommand("analyze", "evaluate the closed-form model");
  analyze->add_option("params", config_path, "analysis parameter file")->required();
  analyze->add_flag("--csv", csv, "print quantity,value rows instead of the table");
  add_common(analyze, common, false);

  CLI::App* preset = app.add_subcommand("preset", "run a named experiment");
  preset->add_option("name", preset_name, "preset name");
  preset->add_flag("--list", list, "list preset names");
  add_common(preset, common, true);

  CLI::App* validate = app.add_subcommand("validate", "check a config and print it resolved");
  validate->add_option("config", config_path, "config file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << app.help();
    return kExitConfig;
  }

  try {
    const OutputOptions options = common.output();
    if (simulate->parsed()) {
      const SimConfig config = with_seed(load_config(config_path), common.seed);
      const fs::path dir = make_run_dir(common.out, fs::path(config_path).stem().string());
      print_summary(out, write_run(dir, config, options));
      out << "run directory: " << dir.string() << '\n';
    } else if (sweep_cmd->parsed()) {
      const SimConfig config = with_seed(load_config(config_path), common.seed);
      const SweepAxis axis = parse_axis(axis_name);
      std::vector<double> parsed;
      for (const std::string& v : values) parsed.push_back(parse_value(v));
      const fs::path dir = make_run_dir(common.out, "sweep-" + axis_name);
      write_sweep(dir, config, axis, parsed, options, out);
      out << "run directory: " << dir.string() << '\n';
    } else if (analyze->parsed()) {
      const analysis::AnalysisParams params = load_analysis_params(config_path);
      const analysis::AnalysisReport report = analysis::assemble_report(params);
      if (csv) {
        write_analysis_csv(out, report, options.sep);
      } else {
        print_analysis_table(out, params, report);
      }
    } else if (preset->parsed()) {
      if (list) {
        for (const ExperimentPreset& p : presets()) out << p.name << "  " << p.description << '\n';
        return kExitOk;
      }
      if (preset_name.empty()) throw ConfigError("preset needs a name (see preset --list)");
      ExperimentPreset p = find_preset(preset_name);
      for (PresetPart& part : p.parts) part.config = with_seed(part.config, common.seed);
      const fs::path dir = make_run_dir(common.out, p.name);
      write_preset(dir, p, options, out);
      out << "run directory: " << dir.string() << '\n';
    } else if (validate->parsed()) {
      const SimConfig config = load_config(config_path);
      for (const std::string& line : describe_config(config)) out << line << '\n';
      out << "config ok\n";
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace phantom::cli
