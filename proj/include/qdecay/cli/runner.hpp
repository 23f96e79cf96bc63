#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdecay/cli/config.hpp"
#include "qdecay/continuum.hpp"

namespace qdecay::cli {

struct ReportLine {
  std::string key;
  std::string value;
};

using Report = std::vector<ReportLine>;

std::string format_report(const Report& report);

/// Header `t,re_a_raw,im_a_raw,re_a,im_a,p`, one row per grid point.
std::string format_series_csv(const SurvivalSeries& series);

/// Writes to a temporary sibling and renames it into place. Throws IoError.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

SurvivalSeries compute_series(const RunConfig& config);

/// Runs every requested analysis. Failures are rethrown with the analysis
/// named in the message.
Report analyze(const RunConfig& config, const SurvivalSeries& series);

struct RunOutcome {
  SurvivalSeries series;
  Report report;
  std::filesystem::path series_path;
  std::filesystem::path report_path;
};

/// Validates, computes, analyzes and writes <dir>/<name>.csv and
/// <dir>/<name>_report.txt. out_dir overrides output.dir.
RunOutcome run(const RunConfig& config,
               const std::optional<std::filesystem::path>& out_dir = std::nullopt);

enum class SweepParam { OmegaMin, OmegaMax, Alpha, M };

SweepParam parse_sweep_param(std::string_view name);
std::string_view sweep_param_name(SweepParam p);

/// Copy of base with one parameter replaced and the output name suffixed.
RunConfig sweep_variant(const RunConfig& base, SweepParam param, double value);

struct SweepRow {
  double value = 0.0;
  bool ok = false;
  std::string series_file;
  std::vector<double> exponential;
  std::vector<double> power_law;
  std::size_t regrowth_count = 0;
  std::optional<double> first_regrowth_t_min;
  std::vector<std::size_t> peak_counts;
  std::string error;
};

struct SweepOutcome {
  std::vector<SweepRow> rows;
  std::filesystem::path summary_path;
  bool all_ok() const;
};

/// Runs each variant in turn, recording failures without stopping, and
/// writes <dir>/<name>_sweep_<param>.csv.
SweepOutcome sweep(const RunConfig& base, SweepParam param, const std::vector<double>& values,
                   const std::optional<std::filesystem::path>& out_dir = std::nullopt);

std::string format_sweep_csv(SweepParam param, const std::vector<SweepRow>& rows);

}  // namespace qdecay::cli
