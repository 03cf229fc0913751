#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cli/presets.hpp"
#include "phantom/analysis.hpp"
#include "phantom/engine.hpp"

namespace phantom::cli {

struct OutputOptions {
  char sep = ',';
  bool trace = false;
};

/// Extension matching the separator: csv or tsv.
std::string table_extension(const OutputOptions& options);

/// `<root>/<UTC timestamp>-<name>`, created fresh; a numeric suffix avoids
/// clobbering an existing directory.
std::filesystem::path make_run_dir(const std::filesystem::path& root, const std::string& name);

/// Runs every replication and writes config.conf, metrics and
/// rep_<k>/events (plus rep_<k>/trace when requested) under `dir`.
MetricsReport write_run(const std::filesystem::path& dir, const SimConfig& config, const OutputOptions& options);

/// One write_run per value under `<axis>_<value>/`, then a sweep summary with
/// columns `<axis>,avg_handover,std`.
std::vector<MetricsReport> write_sweep(const std::filesystem::path& dir, const SimConfig& base, SweepAxis axis,
                                       const std::vector<double>& values, const OutputOptions& options,
                                       std::ostream& log);

/// Runs every part of a preset under `dir/<label>/` and writes `<name>.csv`.
/// analysis_demo writes analysis.csv and prints the table to `log`.
void write_preset(const std::filesystem::path& dir, const ExperimentPreset& preset, const OutputOptions& options,
                  std::ostream& log);

/// Human-readable report of every analytic quantity.
void print_analysis_table(std::ostream& out, const analysis::AnalysisParams& params,
                          const analysis::AnalysisReport& report);

/// `quantity,value` rows with the same content as the table.
void write_analysis_csv(std::ostream& out, const analysis::AnalysisReport& report, char sep = ',');

}  // namespace phantom::cli
