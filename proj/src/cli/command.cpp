#include "qdecay/cli/command.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdecay/analysis.hpp"
#include "qdecay/cli/config.hpp"
#include "qdecay/cli/runner.hpp"
#include "qdecay/discrete.hpp"
#include "qdecay/errors.hpp"
#include "qdecay/specfun.hpp"

namespace qdecay::cli {

namespace {

namespace fs = std::filesystem;

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  std::string_view rest = text;
  if (rest.find_first_not_of(" \t") == std::string_view::npos) return out;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_real(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

void print_lines(std::ostream& out, const Report& r) { out << format_report(r); }

int cmd_run(const std::string& config_path, const std::string& out_dir, std::ostream& out) {
  const RunConfig cfg = load_config(config_path);
  const RunOutcome res =
      run(cfg, out_dir.empty() ? std::nullopt : std::optional<fs::path>(out_dir));
  print_lines(out, res.report);
  out << "output.series = " << res.series_path.string() << "\n";
  out << "output.report = " << res.report_path.string() << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::string& values, const std::string& out_dir, std::ostream& out,
              std::ostream& err) {
  const SweepParam p = parse_sweep_param(param);
  const std::vector<double> vs = parse_value_list(values);
  const RunConfig cfg = load_config(config_path);
  const SweepOutcome res =
      sweep(cfg, p, vs, out_dir.empty() ? std::nullopt : std::optional<fs::path>(out_dir));
  std::size_t failed = 0;
  for (const auto& row : res.rows) {
    if (!row.ok) {
      ++failed;
      err << "error: sweep " << param << " = " << format_real(row.value) << ": " << row.error
          << "\n";
    }
  }
  out << "sweep.rows = " << res.rows.size() << "\n";
  out << "sweep.failed = " << failed << "\n";
  out << "output.summary = " << res.summary_path.string() << "\n";
  return failed == 0 ? kExitOk : kExitNumerical;
}

struct DiscreteOptions {
  int m = 0;
  double epsilon = 0.0;
  double vbar = 0.0;
  double omega_s = 0.0;
  double t0 = 0.0;
  double dt = 0.0;
  long long n = 0;
  std::string out_dir = ".";
  std::string name = "discrete";
  std::string fit;
  bool eigen = false;
};

int cmd_discrete(const DiscreteOptions& o, std::ostream& out) {
  if (!(std::isfinite(o.dt) && o.dt > 0.0)) throw InvalidArgument("--dt must be > 0");
  if (o.n < 1) throw InvalidArgument("--n must be >= 1");
  if (!std::isfinite(o.t0)) throw InvalidArgument("--t0 must be finite");
  const std::vector<TimeWindow> windows = parse_windows(o.fit);
  const DiscreteSpectrum spec{o.m, o.omega_s, o.epsilon, o.vbar};
  spec.validate();
  const EigenSolution eig = solve_eigensystem(spec);

  double weight_sum = 0.0;
  for (double w : eig.weights) weight_sum += w;

  SurvivalSeries s;
  s.t0 = o.t0;
  s.dt = o.dt;
  s.spec = DiscreteLadder{o.m};
  s.params.alpha = 2.0 * std::numbers::pi * o.vbar * o.vbar / o.epsilon;
  s.params.epsilon = o.epsilon;
  s.params.vbar = o.vbar;
  s.params.omega_s = o.omega_s;
  s.normalized = true;
  s.raw_at_zero = weight_sum;
  const auto n = static_cast<std::size_t>(o.n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = o.t0 + static_cast<double>(i) * o.dt;
    const std::complex<double> a = survival_amplitude_discrete(t, eig);
    s.times.push_back(t);
    s.raw_amplitudes.push_back(a);
    s.amplitudes.push_back(a / weight_sum);
    s.probabilities.push_back(std::norm(a / weight_sum));
  }

  Report r;
  r.push_back({"discrete.m", std::to_string(o.m)});
  r.push_back({"discrete.states", std::to_string(spec.state_count())});
  r.push_back({"discrete.alpha", format_real(s.params.alpha)});
  r.push_back({"discrete.weight_sum", format_real(weight_sum)});
  r.push_back({"series.points", std::to_string(n)});
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const std::string key = windows.size() == 1 ? "fit.exponential"
                                                : "fit.exponential." + std::to_string(i);
    const FitResult f = fit_exponential(s, windows[i]);
    r.push_back({key + ".alpha", format_real(f.parameter)});
    r.push_back({key + ".window", format_real(windows[i].lo) + "," + format_real(windows[i].hi)});
    r.push_back({key + ".rms_residual", format_real(f.rms_residual)});
  }

  const fs::path dir = o.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  write_atomic(dir / (o.name + ".csv"), format_series_csv(s));
  write_atomic(dir / (o.name + "_report.txt"), format_report(r));
  if (o.eigen) {
    const std::vector<double> approx = eig.coupled ? weights_lorentzian_approx(eig, spec)
                                                   : std::vector<double>(eig.weights.size(), 0.0);
    std::string csv = "j,omega_prime,weight,weight_lorentzian\n";
    char buf[160];
    for (std::size_t j = 0; j < eig.omega_primes.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", j, eig.omega_primes[j],
                    eig.weights[j], approx[j]);
      csv += buf;
    }
    write_atomic(dir / (o.name + "_eigen.csv"), csv);
  }
  print_lines(out, r);
  out << "output.series = " << (dir / (o.name + ".csv")).string() << "\n";
  return kExitOk;
}

int cmd_moments(const std::string& config_path, int n_max, std::ostream& out) {
  if (n_max < 1) throw InvalidArgument("--n-max must be >= 1");
  const RunConfig cfg = load_config(config_path);
  out << "spec.kind = " << kind_name(cfg.spec) << "\n";
  for (int n = 1; n <= n_max; ++n) {
    const MomentClass m = classify_moment(cfg.spec, cfg.params, n, cfg.abs_tol);
    out << "moment." << n << " = ";
    switch (m.kind) {
      case MomentClass::Kind::Zero:
        out << "zero";
        break;
      case MomentClass::Kind::Infinite:
        out << "infinite";
        break;
      case MomentClass::Kind::Finite:
        out << format_real(m.value);
        break;
    }
    out << "\n";
  }
  return kExitOk;
}

int cmd_check(std::ostream& out) {
  bool ok = true;
  const auto verdict = [&](bool pass) {
    ok = ok && pass;
    return pass ? "pass" : "fail";
  };

  const PaleyWienerReport pw = paley_wiener_checks();
  for (const auto& c : pw.power_integrals) {
    const std::string key = "pw.power.m_" + format_real(c.m);
    const bool pi_match = std::abs(c.measured - c.candidate_pi) < 1e-8 * c.candidate_pi;
    const bool two_pi_match = std::abs(c.measured - c.candidate_two_pi) < 1e-8 * c.candidate_pi;
    out << key << ".measured = " << format_real(c.measured) << "\n";
    out << key << ".pi_over_sin = " << format_real(c.candidate_pi) << "\n";
    out << key << ".two_pi_over_sin = " << format_real(c.candidate_two_pi) << "\n";
    out << key << ".matches = " << (pi_match ? "pi_over_sin" : two_pi_match ? "two_pi_over_sin" : "neither")
        << "\n";
    verdict(pi_match || two_pi_match);
  }
  out << "pw.log_integral = " << format_real(pw.log_integral) << "\n";
  out << "pw.log_integral.expected = " << format_real(pw.log_integral_expected) << "\n";
  out << "pw.log_integral.status = "
      << verdict(std::abs(pw.log_integral - pw.log_integral_expected) < 1e-4) << "\n";
  out << "pw.exponential_rate = " << format_real(pw.exponential_rate) << "\n";
  for (std::size_t i = 0; i < pw.windowed.size(); ++i) {
    const std::string key = "pw.windowed." + std::to_string(i);
    out << key << ".t_end = " << format_real(pw.windowed[i].window_end) << "\n";
    out << key << ".computed = " << format_real(pw.windowed[i].computed) << "\n";
    out << key << ".exponential = " << format_real(pw.windowed[i].exponential) << "\n";
  }

  struct Reference {
    const char* key;
    std::complex<double> got;
    std::complex<double> want;
  };
  const Reference refs[] = {
      {"specfun.ci_1", cosint(1.0), {0.33740392290096813466, 0.0}},
      {"specfun.si_1", sinint(1.0), {0.94608307036718301494, 0.0}},
      {"specfun.ci_i", cosint({0.0, 1.0}), {0.83786694098020824089, std::numbers::pi / 2.0}},
      {"specfun.si_i", sinint({0.0, 1.0}), {0.0, 1.0572508753757285146}},
      {"specfun.si_20", sinint(20.0), {1.5482417010434398402, 0.0}},
  };
  for (const auto& ref : refs) {
    const double rel = std::abs(ref.got - ref.want) / std::abs(ref.want);
    out << ref.key << ".rel_error = " << format_real(rel) << "\n";
    out << ref.key << ".status = " << verdict(rel < 1e-12) << "\n";
  }

  const double z = 0.25;
  const double exact = std::numbers::pi / std::tan(std::numbers::pi * z);
  double prev = 0.0;
  for (long long k : {10LL, 100LL, 1000LL, 10000LL}) {
    const double e = std::abs(cot_sum_partial(z, k) - exact);
    out << "specfun.cot_sum.k_" << k << ".error = " << format_real(e) << "\n";
    if (prev > 0.0) {
      const double ratio = prev / e;
      out << "specfun.cot_sum.k_" << k << ".ratio = " << format_real(ratio) << "\n";
      verdict(ratio >= 8.0 && ratio <= 12.0);
    }
    prev = e;
  }
  out << "check.status = " << (ok ? "pass" : "fail") << "\n";
  return ok ? kExitOk : kExitNumerical;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Survival amplitudes of a state decaying into a Lorentzian continuum"};
  app.require_subcommand(1);

  std::string config_path, out_dir, param, values;
  int n_max = 0;
  DiscreteOptions d;

  auto* run_cmd = app.add_subcommand("run", "Compute one series and its analyses");
  run_cmd->add_option("--config", config_path, "Configuration file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (overrides output.dir)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a configuration over a parameter list");
  sweep_cmd->add_option("--config", config_path, "Base configuration file")->required();
  sweep_cmd->add_option("--param", param, "omega_min, omega_max, alpha or m")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated values (may be empty)")
      ->required()
      ->expected(0, 1);
  sweep_cmd->add_option("--out", out_dir, "Output directory (overrides output.dir)");

  auto* disc_cmd = app.add_subcommand("discrete", "Series for the discrete ladder model");
  disc_cmd->add_option("--m", d.m, "Ladder half-size (2m+1 levels)")->required();
  disc_cmd->add_option("--epsilon", d.epsilon, "Level spacing")->required();
  disc_cmd->add_option("--vbar", d.vbar, "Coupling strength")->required();
  disc_cmd->add_option("--dt", d.dt, "Time step")->required();
  disc_cmd->add_option("--n", d.n, "Number of points")->required();
  disc_cmd->add_option("--omega-s", d.omega_s, "Initial-state frequency");
  disc_cmd->add_option("--t0", d.t0, "First time");
  disc_cmd->add_option("--out", d.out_dir, "Output directory");
  disc_cmd->add_option("--name", d.name, "Output file stem");
  disc_cmd->add_option("--fit", d.fit, "Exponential fit windows lo,hi[;lo,hi]");
  disc_cmd->add_flag("--eigen", d.eigen, "Also write eigenfrequencies and weights");

  auto* mom_cmd = app.add_subcommand("moments", "Classify energy moments");
  mom_cmd->add_option("--config", config_path, "Configuration file")->required();
  mom_cmd->add_option("--n-max", n_max, "Highest order")->required();

  auto* check_cmd = app.add_subcommand("check", "Integral identities and special-function checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(config_path, out_dir, out);
    if (*sweep_cmd) return cmd_sweep(config_path, param, values, out_dir, out, err);
    if (*disc_cmd) return cmd_discrete(d, out);
    if (*mom_cmd) return cmd_moments(config_path, n_max, out);
    if (*check_cmd) return cmd_check(out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace qdecay::cli
