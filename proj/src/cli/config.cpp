#include "qdecay/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "qdecay/errors.hpp"

namespace qdecay::cli {

namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "spec.kind",          "spec.omega_min",       "spec.omega_max",      "spec.m",
    "model.alpha",        "model.epsilon",        "model.vbar",          "model.omega_s",
    "model.include_vbar_sq", "grid.t0",           "grid.dt",             "grid.n",
    "series.normalize",   "quad.abs_tol",         "output.name",         "output.dir",
    "analysis.exponential", "analysis.power_law", "analysis.peaks",      "analysis.regrowth",
    "analysis.short_time", "analysis.moments",
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

using Entries = std::map<std::string, Entry, std::less<>>;

[[noreturn]] void fail_at(const Entry& e, std::string_view key, const std::string& msg) {
  throw InvalidArgument("config line " + std::to_string(e.line) + " (" + std::string(key) +
                        "): " + msg);
}

template <class F>
auto convert(const Entries& entries, std::string_view key, F&& f) {
  const Entry& e = entries.find(key)->second;
  try {
    return f(e.value);
  } catch (const InvalidArgument& ex) {
    fail_at(e, key, ex.what());
  }
}

std::optional<double> get_real(const Entries& m, std::string_view key) {
  if (!m.contains(key)) return std::nullopt;
  return convert(m, key, [](const std::string& v) { return parse_real(v); });
}

}  // namespace

double parse_real(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const char* end = text.data() + text.size();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw InvalidArgument("expected a finite number, got '" + std::string(text) + "'");
  return v;
}

long long parse_integer(std::string_view text) {
  text = trim(text);
  long long v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end)
    throw InvalidArgument("expected an integer, got '" + std::string(text) + "'");
  return v;
}

bool parse_bool(std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw InvalidArgument("expected true or false, got '" + std::string(text) + "'");
}

std::vector<TimeWindow> parse_windows(std::string_view text) {
  std::vector<TimeWindow> out;
  text = trim(text);
  if (text.empty()) return out;
  while (true) {
    const auto semi = text.find(';');
    const std::string_view item = trim(text.substr(0, semi));
    const auto comma = item.find(',');
    if (comma == std::string_view::npos)
      throw InvalidArgument("window '" + std::string(item) + "' is not of the form lo,hi");
    TimeWindow w{parse_real(item.substr(0, comma)), parse_real(item.substr(comma + 1))};
    if (!(w.lo < w.hi))
      throw InvalidArgument("window '" + std::string(item) + "' needs lo < hi");
    out.push_back(w);
    if (semi == std::string_view::npos) break;
    text = text.substr(semi + 1);
  }
  return out;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void RunConfig::validate() const {
  qdecay::validate(spec);
  params.validate();
  if (!std::isfinite(t0)) throw InvalidArgument("grid.t0 must be finite");
  if (!(std::isfinite(dt) && dt > 0.0)) throw InvalidArgument("grid.dt must be > 0");
  if (n < 1) throw InvalidArgument("grid.n must be >= 1");
  if (!(std::isfinite(abs_tol) && abs_tol > 0.0)) throw InvalidArgument("quad.abs_tol must be > 0");
  if (name.empty() || name.find('/') != std::string::npos)
    throw InvalidArgument("output.name must be a plain file name");
  const double hi = t_end();
  const auto check = [&](const std::vector<TimeWindow>& ws, const char* key) {
    for (const auto& w : ws)
      if (w.lo < t0 || w.hi > hi)
        throw InvalidArgument(std::string(key) + " window [" + format_real(w.lo) + ", " +
                              format_real(w.hi) + "] lies outside the grid [" + format_real(t0) +
                              ", " + format_real(hi) + "]");
  };
  check(analyses.exponential, "analysis.exponential");
  check(analyses.power_law, "analysis.power_law");
  check(analyses.peaks, "analysis.peaks");
  if (analyses.moments < 0) throw InvalidArgument("analysis.moments must be >= 0");
}

RunConfig parse_config(std::string_view text, const std::string& default_name) {
  Entries entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!kKnownKeys.contains(key))
      throw InvalidArgument("config line " + std::to_string(line_no) + ": unknown key '" + key +
                            "'");
    if (entries.contains(key))
      throw InvalidArgument("config line " + std::to_string(line_no) + ": duplicate key '" + key +
                            "'");
    entries.emplace(key, Entry{value, line_no});
  }

  RunConfig cfg;
  cfg.name = default_name;

  const std::string kind = entries.contains("spec.kind") ? entries["spec.kind"].value : "";
  const auto require_real = [&](std::string_view key) {
    const auto v = get_real(entries, key);
    if (!v) throw InvalidArgument("spec.kind = " + kind + " requires " + std::string(key));
    return *v;
  };
  const auto forbid = [&](std::string_view key) {
    if (entries.contains(key))
      fail_at(entries.find(key)->second, key, "not used by spec.kind = " + kind);
  };
  if (kind == "full") {
    forbid("spec.omega_min");
    forbid("spec.omega_max");
    forbid("spec.m");
    cfg.spec = FullLine{};
  } else if (kind == "lower_truncated") {
    forbid("spec.omega_max");
    forbid("spec.m");
    cfg.spec = LowerTruncated{require_real("spec.omega_min")};
  } else if (kind == "doubly_truncated") {
    forbid("spec.m");
    cfg.spec = DoublyTruncated{require_real("spec.omega_min"), require_real("spec.omega_max")};
  } else if (kind == "discrete") {
    forbid("spec.omega_min");
    forbid("spec.omega_max");
    if (!entries.contains("spec.m")) throw InvalidArgument("spec.kind = discrete requires spec.m");
    const long long m = convert(entries, "spec.m", [](const std::string& v) {
      return parse_integer(v);
    });
    if (m < 0 || m > 1000000) fail_at(entries["spec.m"], "spec.m", "out of range");
    cfg.spec = DiscreteLadder{static_cast<int>(m)};
  } else if (kind.empty()) {
    throw InvalidArgument("config is missing spec.kind");
  } else {
    fail_at(entries["spec.kind"], "spec.kind", "unknown kind '" + kind + "'");
  }

  ModelParams& p = cfg.params;
  p.epsilon = get_real(entries, "model.epsilon");
  p.vbar = get_real(entries, "model.vbar");
  if (auto v = get_real(entries, "model.omega_s")) p.omega_s = *v;
  if (entries.contains("model.include_vbar_sq"))
    p.include_vbar_sq = convert(entries, "model.include_vbar_sq",
                                [](const std::string& v) { return parse_bool(v); });
  if (auto a = get_real(entries, "model.alpha")) {
    p.alpha = *a;
  } else if (p.vbar && p.epsilon) {
    p.alpha = 2.0 * std::numbers::pi * (*p.vbar) * (*p.vbar) / *p.epsilon;
  } else {
    throw InvalidArgument("config needs model.alpha, or model.vbar and model.epsilon");
  }

  if (auto v = get_real(entries, "grid.t0")) cfg.t0 = *v;
  if (auto v = get_real(entries, "grid.dt")) cfg.dt = *v;
  if (!entries.contains("grid.n")) throw InvalidArgument("config is missing grid.n");
  const long long n = convert(entries, "grid.n", [](const std::string& v) {
    return parse_integer(v);
  });
  if (n < 1) fail_at(entries["grid.n"], "grid.n", "must be >= 1");
  cfg.n = static_cast<std::size_t>(n);
  if (!entries.contains("grid.dt")) throw InvalidArgument("config is missing grid.dt");

  if (entries.contains("series.normalize"))
    cfg.normalize =
        convert(entries, "series.normalize", [](const std::string& v) { return parse_bool(v); });
  if (auto v = get_real(entries, "quad.abs_tol")) cfg.abs_tol = *v;
  if (entries.contains("output.name")) cfg.name = entries["output.name"].value;
  if (entries.contains("output.dir")) cfg.output_dir = entries["output.dir"].value;

  AnalysisRequest& a = cfg.analyses;
  const auto windows = [&](std::string_view key) {
    if (!entries.contains(key)) return std::vector<TimeWindow>{};
    return convert(entries, key, [](const std::string& v) { return parse_windows(v); });
  };
  a.exponential = windows("analysis.exponential");
  a.power_law = windows("analysis.power_law");
  a.peaks = windows("analysis.peaks");
  const auto flag = [&](std::string_view key) {
    if (!entries.contains(key)) return false;
    return convert(entries, key, [](const std::string& v) { return parse_bool(v); });
  };
  a.regrowth = flag("analysis.regrowth");
  a.short_time = flag("analysis.short_time");
  if (entries.contains("analysis.moments")) {
    const long long m = convert(entries, "analysis.moments", [](const std::string& v) {
      return parse_integer(v);
    });
    if (m < 0 || m > 64) fail_at(entries["analysis.moments"], "analysis.moments", "must be in [0, 64]");
    a.moments = static_cast<int>(m);
  }

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading config file '" + path.string() + "'");
  return parse_config(buf.str(), path.stem().string());
}

}  // namespace qdecay::cli
