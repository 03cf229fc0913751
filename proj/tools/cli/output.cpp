#include "cli/output.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <utility>

#include "phantom/config.hpp"
#include "phantom/csv.hpp"
#include "phantom/errors.hpp"

namespace phantom::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string point_label(SweepAxis axis, double value) {
  if (axis == SweepAxis::dwell_toggle) return value != 0.0 ? "dwell_on" : "dwell_off";
  return std::string(to_string(axis)) + "_" + format_double(value);
}

std::string axis_value(SweepAxis axis, double value) {
  if (axis == SweepAxis::dwell_toggle) return value != 0.0 ? "on" : "off";
  return format_double(value);
}

std::vector<std::pair<std::string, double>> analysis_rows(const analysis::AnalysisReport& r) {
  std::vector<std::pair<std::string, double>> rows = {
      {"blocking_probability", r.blocking},
      {"dwell_exceed_probability", r.dwell_ok},
      {"access_probability", r.access},
      {"macro_above", r.components.macro_above},
      {"access_denied", r.components.access_denied},
      {"cell_full", r.components.cell_full},
      {"dwell_short", r.components.dwell_short},
      {"phantom_below", r.components.phantom_below},
      {"p_s2", r.state2.value},
      {"p_s2_raw", r.state2.raw},
      {"p_s2_clamped", r.state2.clamped ? 1.0 : 0.0},
      {"phantom_above_now", r.phantom_above_now},
      {"joint_cross", r.joint_cross},
      {"conditional_numerator", r.conditional.numerator},
      {"conditional_denominator", r.conditional.denominator},
      {"sinr_given_s2", r.factors.sinr_given_s2},
      {"capacity_free", r.factors.capacity_free},
      {"p12", r.p12},
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rows.emplace_back("P" + std::to_string(i + 1) + std::to_string(j + 1), r.matrix(i, j));
  for (int i = 0; i < 3; ++i) rows.emplace_back("pi_s" + std::to_string(i + 1), r.stationary(i));
  return rows;
}

}  // namespace

std::string table_extension(const OutputOptions& options) { return options.sep == '\t' ? "tsv" : "csv"; }

fs::path make_run_dir(const fs::path& root, const std::string& name) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
  const std::string stem = std::string(stamp) + "-" + name;
  fs::create_directories(root);
  fs::path dir = root / stem;
  for (int k = 2; fs::exists(dir); ++k) dir = root / (stem + "-" + std::to_string(k));
  fs::create_directories(dir);
  return dir;
}

MetricsReport write_run(const fs::path& dir, const SimConfig& config, const OutputOptions& options) {
  RunResult result = run(config, RunOptions{true, options.trace});
  fs::create_directories(dir);
  const std::string ext = table_extension(options);
  open_output(dir / "config.conf") << dump_config(config);
  {
    std::ofstream out = open_output(dir / ("metrics." + ext));
    write_metrics_csv(out, result.report, options.sep);
  }
  for (size_t k = 0; k < result.events.size(); ++k) {
    const fs::path rep = dir / ("rep_" + std::to_string(k));
    fs::create_directories(rep);
    std::ofstream events = open_output(rep / ("events." + ext));
    write_events_csv(events, result.events[k], options.sep);
    if (options.trace) {
      std::ofstream trace = open_output(rep / ("trace." + ext));
      write_trace_csv(trace, result.traces[k], config.dt, options.sep);
    }
  }
  return result.report;
}

std::vector<MetricsReport> write_sweep(const fs::path& dir, const SimConfig& base, SweepAxis axis,
                                       const std::vector<double>& values, const OutputOptions& options,
                                       std::ostream& log) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<SimConfig> configs;
  for (double v : values) {
    configs.push_back(apply_axis(base, axis, v));
    configs.back().validate();
  }
  std::vector<MetricsReport> reports;
  for (size_t i = 0; i < values.size(); ++i) {
    reports.push_back(write_run(dir / point_label(axis, values[i]), configs[i], options));
    log << to_string(axis) << "=" << axis_value(axis, values[i])
        << " avg_handover=" << format_double(reports.back().avg_handover_per_user.mean)
        << " std=" << format_double(reports.back().avg_handover_per_user.std) << '\n';
  }
  const char s = options.sep;
  std::ofstream out = open_output(dir / ("sweep." + table_extension(options)));
  out << to_string(axis) << s << "avg_handover" << s << "std\n";
  for (size_t i = 0; i < values.size(); ++i) {
    out << axis_value(axis, values[i]) << s << format_double(reports[i].avg_handover_per_user.mean) << s
        << format_double(reports[i].avg_handover_per_user.std) << '\n';
  }
  return reports;
}

void write_preset(const fs::path& dir, const ExperimentPreset& preset, const OutputOptions& options,
                  std::ostream& log) {
  fs::create_directories(dir);
  const char s = options.sep;
  const std::string ext = table_extension(options);
  if (preset.analysis) {
    const analysis::AnalysisParams params;
    const analysis::AnalysisReport report = analysis::assemble_report(params);
    print_analysis_table(log, params, report);
    std::ofstream out = open_output(dir / ("analysis." + ext));
    write_analysis_csv(out, report, s);
    return;
  }

  std::ofstream summary = open_output(dir / (preset.name + "." + ext));
  const bool single = preset.parts.size() == 1;
  bool header = false;
  for (const PresetPart& part : preset.parts) {
    const fs::path sub = dir / part.label;
    if (part.axis) {
      log << "[" << part.label << "]\n";
      const auto reports = write_sweep(sub, part.config, *part.axis, part.values, options, log);
      if (!header) {
        if (!single) summary << "part" << s;
        summary << to_string(*part.axis) << s << "avg_handover" << s << "std\n";
        header = true;
      }
      for (size_t i = 0; i < reports.size(); ++i) {
        if (!single) summary << part.label << s;
        summary << axis_value(*part.axis, part.values[i]) << s
                << format_double(reports[i].avg_handover_per_user.mean) << s
                << format_double(reports[i].avg_handover_per_user.std) << '\n';
      }
    } else {
      const MetricsReport r = write_run(sub, part.config, options);
      log << part.label << " handovers=" << format_double(r.handovers.mean)
          << " avg_handover=" << format_double(r.avg_handover_per_user.mean) << '\n';
      if (!header) {
        summary << "part" << s << "environment" << s << "mode" << s << "handovers" << s << "avg_handover" << s
                << "std\n";
        header = true;
      }
      summary << part.label << s << to_string(part.config.scenario.environment) << s
              << to_string(part.config.policy.mode) << s << format_double(r.handovers.mean) << s
              << format_double(r.avg_handover_per_user.mean) << s << format_double(r.avg_handover_per_user.std)
              << '\n';
    }
  }
}

void print_analysis_table(std::ostream& out, const analysis::AnalysisParams& params,
                          const analysis::AnalysisReport& report) {
  const auto& t = params.traffic;
  out << "inputs: lambda_n=" << format_double(t.lambda_n) << " lambda_h=" << format_double(t.lambda_h)
      << " mu_c=" << format_double(t.mu_c) << " T=" << t.total_channels << " g=" << t.guard_channels
      << " mean_dwell=" << format_double(params.mean_dwell) << " t_expected=" << format_double(params.t_expected)
      << '\n';
  for (const auto& [name, value] : analysis_rows(report)) {
    if (name == "P11") break;
    out << std::left << std::setw(26) << name << format_double(value) << '\n';
  }
  out << "transition matrix (entry i,j: from Sj to Si)\n";
  for (int i = 0; i < 3; ++i) {
    out << "  S" << i + 1;
    for (int j = 0; j < 3; ++j) out << "  " << std::setw(12) << format_double(report.matrix(i, j));
    out << '\n';
  }
  out << "stationary distribution\n";
  for (int i = 0; i < 3; ++i) out << "  S" << i + 1 << "  " << format_double(report.stationary(i)) << '\n';
}

void write_analysis_csv(std::ostream& out, const analysis::AnalysisReport& report, char sep) {
  out << "quantity" << sep << "value\n";
  for (const auto& [name, value] : analysis_rows(report)) out << name << sep << format_double(value) << '\n';
}

}  // namespace phantom::cli
