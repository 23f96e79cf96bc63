#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qdecay/analysis.hpp"
#include "qdecay/model.hpp"
#include "qdecay/quadrature.hpp"

namespace qdecay::cli {

struct AnalysisRequest {
  std::vector<TimeWindow> exponential;
  std::vector<TimeWindow> power_law;
  std::vector<TimeWindow> peaks;
  bool regrowth = false;
  bool short_time = false;
  /// Highest moment order to classify; 0 disables.
  int moments = 0;
};

/// Everything one `run` needs. Parsed from a flat file of dotted
/// `key = value` lines:
///
///   spec.kind          full | lower_truncated | doubly_truncated | discrete
///   spec.omega_min, spec.omega_max, spec.m
///   model.alpha, model.epsilon, model.vbar, model.omega_s, model.include_vbar_sq
///   grid.t0, grid.dt, grid.n
///   series.normalize   (default true)
///   quad.abs_tol
///   output.name, output.dir
///   analysis.exponential, analysis.power_law, analysis.peaks   lo,hi[;lo,hi...]
///   analysis.regrowth, analysis.short_time                     true | false
///   analysis.moments                                           highest order
///
/// model.alpha may be omitted when model.vbar and model.epsilon are given.
struct RunConfig {
  ContinuumSpec spec = FullLine{};
  ModelParams params;
  double t0 = 0.0;
  double dt = 1.0;
  std::size_t n = 0;
  bool normalize = true;
  double abs_tol = kDefaultAbsTol;
  std::string name = "series";
  std::filesystem::path output_dir = ".";
  AnalysisRequest analyses;

  double t_end() const noexcept { return t0 + static_cast<double>(n) * dt; }
  /// Grid, tolerance, spec, parameters and analysis windows.
  void validate() const;
};

/// Throws InvalidArgument with the offending line number. default_name is
/// used when output.name is absent.
RunConfig parse_config(std::string_view text, const std::string& default_name = "series");

/// Reads and parses a file. output.name defaults to the file stem. Throws
/// IoError if the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);

/// "lo,hi" pairs separated by ';'.
std::vector<TimeWindow> parse_windows(std::string_view text);

double parse_real(std::string_view text);
long long parse_integer(std::string_view text);
bool parse_bool(std::string_view text);

/// Shortest round-trip form is not required; 17 significant digits.
std::string format_real(double v);

}  // namespace qdecay::cli
