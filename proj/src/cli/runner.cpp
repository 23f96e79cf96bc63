#include "qdecay/cli/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <system_error>
#include <utility>
#include <variant>

#include "qdecay/errors.hpp"

namespace qdecay::cli {

namespace {

namespace fs = std::filesystem;

// Reruns f, prefixing any library error with the stage that failed while
// keeping its category (and therefore its exit code).
template <class F>
auto in_stage(const std::string& stage, F&& f) {
  try {
    return f();
  } catch (const SeriesError& e) {
    throw SeriesError(stage + ": " + e.what(), e.index(), e.time());
  } catch (const NumericalError& e) {
    throw NumericalError(stage + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(stage + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(stage + ": " + e.what());
  }
}

std::string window_text(const TimeWindow& w) {
  return format_real(w.lo) + "," + format_real(w.hi);
}

std::string indexed(const std::string& base, std::size_t i, std::size_t count) {
  return count == 1 ? base : base + "." + std::to_string(i);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <class T, class F>
std::string joined(const std::vector<T>& xs, F&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ';';
    out += fmt(xs[i]);
  }
  return out;
}

std::string short_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string format_report(const Report& report) {
  std::string out;
  for (const auto& line : report) out += line.key + " = " + line.value + "\n";
  return out;
}

std::string format_series_csv(const SurvivalSeries& series) {
  std::string out = "t,re_a_raw,im_a_raw,re_a,im_a,p\n";
  char buf[256];
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& raw = series.raw_amplitudes[i];
    const auto& a = series.amplitudes[i];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", series.times[i],
                  raw.real(), raw.imag(), a.real(), a.imag(), series.probabilities[i]);
    out += buf;
  }
  return out;
}

void write_atomic(const fs::path& path, std::string_view contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot move output into '" + path.string() + "': " + ec.message());
  }
}

SurvivalSeries compute_series(const RunConfig& config) {
  return in_stage("series", [&] {
    return survival_series(config.spec, config.t0, config.dt, config.n, config.params,
                           config.normalize, config.abs_tol);
  });
}

Report analyze(const RunConfig& config, const SurvivalSeries& series) {
  Report r;
  const auto add = [&](std::string key, std::string value) {
    r.push_back({std::move(key), std::move(value)});
  };
  add("spec.kind", std::string(kind_name(config.spec)));
  add("model.alpha", format_real(config.params.alpha));
  add("series.points", std::to_string(series.size()));
  add("series.normalized", series.normalized ? "true" : "false");
  add("series.raw_at_zero", format_real(series.raw_at_zero));

  const AnalysisRequest& a = config.analyses;
  for (std::size_t i = 0; i < a.exponential.size(); ++i) {
    const TimeWindow w = a.exponential[i];
    const std::string key = indexed("fit.exponential", i, a.exponential.size());
    const FitResult f = in_stage("analysis " + key + " [" + window_text(w) + "]",
                                 [&] { return fit_exponential(series, w); });
    add(key + ".alpha", format_real(f.parameter));
    add(key + ".window", window_text(w));
    add(key + ".rms_residual", format_real(f.rms_residual));
    add(key + ".points", std::to_string(f.points));
  }
  for (std::size_t i = 0; i < a.power_law.size(); ++i) {
    const TimeWindow w = a.power_law[i];
    const std::string key = indexed("fit.power_law", i, a.power_law.size());
    const FitResult f = in_stage("analysis " + key + " [" + window_text(w) + "]",
                                 [&] { return fit_power_law(series, w); });
    add(key + ".delta", format_real(f.parameter));
    add(key + ".window", window_text(w));
    add(key + ".rms_residual", format_real(f.rms_residual));
    add(key + ".points", std::to_string(f.points));
  }
  if (a.short_time) {
    const FitResult f = in_stage("analysis short_time", [&] { return short_time_classify(series); });
    add("short_time.kind", std::string(fit_kind_name(f.kind)));
    add("short_time.parameter", format_real(f.parameter));
    add("short_time.slope_at_zero", format_real(f.slope_at_zero.value_or(0.0)));
    add("short_time.rms_residual", format_real(f.rms_residual));
  }
  if (a.regrowth) {
    const auto events = in_stage("analysis regrowth", [&] { return detect_regrowth(series); });
    add("regrowth.count", std::to_string(events.size()));
    for (std::size_t i = 0; i < events.size(); ++i) {
      const std::string key = "regrowth." + std::to_string(i);
      add(key + ".t_min", format_real(events[i].t_min));
      add(key + ".p_min", format_real(events[i].p_min));
      add(key + ".t_peak", format_real(events[i].t_peak));
      add(key + ".p_peak", format_real(events[i].p_peak));
      add(key + ".gain", format_real(events[i].gain));
    }
  }
  for (std::size_t i = 0; i < a.peaks.size(); ++i) {
    const TimeWindow w = a.peaks[i];
    const std::string key = indexed("peaks", i, a.peaks.size());
    const std::size_t count =
        in_stage("analysis " + key, [&] { return count_local_maxima(series, w); });
    add(key + ".window", window_text(w));
    add(key + ".count", std::to_string(count));
  }
  for (int n = 1; n <= a.moments; ++n) {
    const MomentClass m = in_stage("analysis moment " + std::to_string(n), [&] {
      return classify_moment(config.spec, config.params, n, config.abs_tol);
    });
    std::string v = m.kind == MomentClass::Kind::Zero       ? "zero"
                    : m.kind == MomentClass::Kind::Infinite ? "infinite"
                                                            : format_real(m.value);
    add("moment." + std::to_string(n), v);
  }
  return r;
}

RunOutcome run(const RunConfig& config, const std::optional<fs::path>& out_dir) {
  in_stage("config", [&] { config.validate(); });
  const fs::path dir = out_dir.value_or(config.output_dir);

  RunOutcome out;
  out.series = compute_series(config);
  out.report = analyze(config, out.series);

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  out.series_path = dir / (config.name + ".csv");
  out.report_path = dir / (config.name + "_report.txt");
  in_stage("output", [&] {
    write_atomic(out.series_path, format_series_csv(out.series));
    write_atomic(out.report_path, format_report(out.report));
  });
  return out;
}

SweepParam parse_sweep_param(std::string_view name) {
  if (name == "omega_min") return SweepParam::OmegaMin;
  if (name == "omega_max") return SweepParam::OmegaMax;
  if (name == "alpha") return SweepParam::Alpha;
  if (name == "m") return SweepParam::M;
  throw InvalidArgument("unknown sweep parameter '" + std::string(name) +
                        "' (expected omega_min, omega_max, alpha or m)");
}

std::string_view sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::OmegaMin:
      return "omega_min";
    case SweepParam::OmegaMax:
      return "omega_max";
    case SweepParam::Alpha:
      return "alpha";
    case SweepParam::M:
      return "m";
  }
  return "unknown";
}

RunConfig sweep_variant(const RunConfig& base, SweepParam param, double value) {
  RunConfig cfg = base;
  switch (param) {
    case SweepParam::OmegaMin:
      if (auto* s = std::get_if<LowerTruncated>(&cfg.spec)) {
        s->omega_min = value;
      } else if (auto* d = std::get_if<DoublyTruncated>(&cfg.spec)) {
        d->omega_min = value;
      } else {
        throw InvalidArgument("omega_min sweep needs a truncated spec");
      }
      break;
    case SweepParam::OmegaMax:
      if (auto* d = std::get_if<DoublyTruncated>(&cfg.spec)) {
        d->omega_max = value;
      } else {
        throw InvalidArgument("omega_max sweep needs a doubly_truncated spec");
      }
      break;
    case SweepParam::Alpha:
      cfg.params.alpha = value;
      // Keep the coupling relation: epsilon stays fixed, vbar follows alpha.
      if (cfg.params.vbar && cfg.params.epsilon && value > 0.0)
        cfg.params.vbar = std::sqrt(value * *cfg.params.epsilon / (2.0 * std::numbers::pi));
      break;
    case SweepParam::M: {
      auto* d = std::get_if<DiscreteLadder>(&cfg.spec);
      if (!d) throw InvalidArgument("m sweep needs a discrete spec");
      if (!(value >= 0.0 && value == std::floor(value) && value <= 1e6))
        throw InvalidArgument("m must be a nonnegative integer, got " + short_value(value));
      d->m = static_cast<int>(value);
      break;
    }
  }
  cfg.name = base.name + "_" + std::string(sweep_param_name(param)) + "_" + short_value(value);
  cfg.validate();
  return cfg;
}

bool SweepOutcome::all_ok() const {
  for (const auto& r : rows)
    if (!r.ok) return false;
  return true;
}

std::string format_sweep_csv(SweepParam param, const std::vector<SweepRow>& rows) {
  std::string out =
      "param,value,status,series_file,exponential,power_law,regrowth_count,"
      "first_regrowth_t_min,peaks,error\n";
  for (const auto& r : rows) {
    out += std::string(sweep_param_name(param)) + "," + format_real(r.value) + "," +
           (r.ok ? "ok" : "failed") + "," + csv_field(r.series_file) + "," +
           joined(r.exponential, format_real) + "," + joined(r.power_law, format_real) + "," +
           (r.ok ? std::to_string(r.regrowth_count) : "") + "," +
           (r.first_regrowth_t_min ? format_real(*r.first_regrowth_t_min) : "") + "," +
           joined(r.peak_counts, [](std::size_t c) { return std::to_string(c); }) + "," +
           csv_field(r.error) + "\n";
  }
  return out;
}

SweepOutcome sweep(const RunConfig& base, SweepParam param, const std::vector<double>& values,
                   const std::optional<fs::path>& out_dir) {
  const fs::path dir = out_dir.value_or(base.output_dir);
  SweepOutcome outcome;
  for (double v : values) {
    SweepRow row;
    row.value = v;
    try {
      const RunConfig cfg = sweep_variant(base, param, v);
      const RunOutcome res = run(cfg, dir);
      row.series_file = res.series_path.filename().string();
      for (const auto& w : cfg.analyses.exponential)
        row.exponential.push_back(fit_exponential(res.series, w).parameter);
      for (const auto& w : cfg.analyses.power_law)
        row.power_law.push_back(fit_power_law(res.series, w).parameter);
      if (res.series.size() >= 3) {
        const auto events = detect_regrowth(res.series);
        row.regrowth_count = events.size();
        if (!events.empty()) row.first_regrowth_t_min = events.front().t_min;
      }
      for (const auto& w : cfg.analyses.peaks)
        row.peak_counts.push_back(count_local_maxima(res.series, w));
      row.ok = true;
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
      row.exponential.clear();
      row.power_law.clear();
      row.peak_counts.clear();
      row.first_regrowth_t_min.reset();
    }
    outcome.rows.push_back(std::move(row));
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  outcome.summary_path = dir / (base.name + "_sweep_" + std::string(sweep_param_name(param)) + ".csv");
  write_atomic(outcome.summary_path, format_sweep_csv(param, outcome.rows));
  return outcome;
}

}  // namespace qdecay::cli
