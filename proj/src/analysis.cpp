#include "qdecay/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <variant>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qdecay/discrete.hpp"

namespace qdecay {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr std::size_t kMinFitPoints = 4;

double window_slack(const TimeWindow& w) {
  return 1e-9 * std::max({1.0, std::abs(w.lo), std::abs(w.hi)});
}

void check_window(const TimeWindow& w) {
  if (!(std::isfinite(w.lo) && std::isfinite(w.hi) && w.lo < w.hi))
    throw InvalidArgument("fit window needs lo < hi, got [" + std::to_string(w.lo) + ", " +
                          std::to_string(w.hi) + "]");
}

void check_lengths(std::span<const double> t, std::span<const double> p) {
  if (t.size() != p.size())
    throw InvalidArgument("time and probability arrays differ in length");
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
  std::size_t points = 0;
};

// Ordinary least squares y = intercept + slope x.
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  if (!(sxx > 0.0)) throw FitError("fit abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = ym - f.slope * xm;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  f.points = x.size();
  return f;
}

FitResult log_fit(std::span<const double> t, std::span<const double> p, TimeWindow window,
                  bool log_time) {
  check_lengths(t, p);
  check_window(window);
  const double slack = window_slack(window);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window.lo - slack || t[i] > window.hi + slack) continue;
    if (!(p[i] > 0.0) || !std::isfinite(p[i]))
      throw FitError("nonpositive probability " + std::to_string(p[i]) + " at t = " +
                     std::to_string(t[i]));
    if (log_time && !(t[i] > 0.0))
      throw FitError("power-law fit needs t > 0, got t = " + std::to_string(t[i]));
    x.push_back(log_time ? std::log(t[i]) : t[i]);
    y.push_back(std::log(p[i]));
  }
  if (x.size() < kMinFitPoints)
    throw FitError("fit window [" + std::to_string(window.lo) + ", " + std::to_string(window.hi) +
                   "] holds " + std::to_string(x.size()) + " points, need at least " +
                   std::to_string(kMinFitPoints));
  const LineFit f = least_squares(x, y);
  FitResult r;
  r.kind = log_time ? FitKind::PowerLaw : FitKind::Exponential;
  r.parameter = -f.slope;
  r.window = window;
  r.rms_residual = f.rms;
  r.intercept = f.intercept;
  r.points = f.points;
  return r;
}

bool strict_min(std::span<const double> p, std::size_t i) {
  return p[i] < p[i - 1] && p[i] < p[i + 1];
}

bool strict_max(std::span<const double> p, std::size_t i) {
  return p[i] > p[i - 1] && p[i] > p[i + 1];
}

std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double checked_exp_sinh(const auto& f, const char* what) {
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0;
  const double v = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(),
                                        1e-13, &err);
  if (!std::isfinite(v) || err > 1e-9 * std::max(1.0, std::abs(v)))
    throw NumericalError(std::string("quadrature failed for ") + what + " (value " +
                         format_g(v) + ", error " + format_g(err) + ")");
  return v;
}

// 2 int_0^inf t^(m-1) / (1 + t^2) dt with t = e^x, both half-lines folded
// onto x >= 0 and written so nothing overflows.
double power_integral(double m) {
  const auto f = [m](double x) {
    return (std::exp((m - 2.0) * x) + std::exp(-m * x)) / (1.0 + std::exp(-2.0 * x));
  };
  return 2.0 * checked_exp_sinh(f, "t^(m-1)/(1+t^2)");
}

// 2 int_0^inf |ln t| / (1 + t^2) dt, same substitution.
double log_integral() {
  const auto f = [](double x) { return 2.0 * x * std::exp(-x) / (1.0 + std::exp(-2.0 * x)); };
  return 2.0 * checked_exp_sinh(f, "|ln t|/(1+t^2)");
}

}  // namespace

std::string_view fit_kind_name(FitKind kind) {
  switch (kind) {
    case FitKind::Exponential:
      return "exponential";
    case FitKind::PowerLaw:
      return "power_law";
    case FitKind::Linear:
      return "linear";
    case FitKind::Quadratic:
      return "quadratic";
  }
  return "unknown";
}

MomentClass classify_moment(const ContinuumSpec& spec, const ModelParams& params, int n,
                            double abs_tol) {
  if (n < 1) throw InvalidArgument("moment order must be >= 1, got " + std::to_string(n));
  validate(spec);
  params.validate();
  return std::visit(
      overloaded{
          [&](const FullLine&) {
            return n % 2 == 1 ? MomentClass::zero() : MomentClass::infinite();
          },
          [&](const LowerTruncated&) { return MomentClass::infinite(); },
          [&](const DoublyTruncated& s) {
            if (s.symmetric() && n % 2 == 1) return MomentClass::finite(0.0);
            const auto f = [&](double w) { return std::pow(w, n) * lorentzian_density(w, params); };
            double err = 0.0;
            const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                f, s.omega_min, s.omega_max, 20, 1e-14, &err);
            if (!std::isfinite(v) || err > abs_tol * std::max(1.0, std::abs(v)))
              throw NumericalError("moment quadrature missed tolerance (error " +
                                   format_g(err) + ")");
            return MomentClass::finite(v);
          },
          [&](const DiscreteLadder& d) {
            const EigenSolution eig = solve_eigensystem(make_spectrum(d, params));
            double v = 0.0;
            for (std::size_t j = 0; j < eig.weights.size(); ++j)
              v += eig.weights[j] * std::pow(eig.omega_primes[j], n);
            return MomentClass::finite(v);
          },
      },
      spec);
}

FitResult fit_exponential(std::span<const double> t, std::span<const double> p,
                          TimeWindow window) {
  return log_fit(t, p, window, false);
}

FitResult fit_exponential(const SurvivalSeries& series, TimeWindow window) {
  return fit_exponential(series.times, series.probabilities, window);
}

FitResult fit_power_law(std::span<const double> t, std::span<const double> p, TimeWindow window) {
  return log_fit(t, p, window, true);
}

FitResult fit_power_law(const SurvivalSeries& series, TimeWindow window) {
  return fit_power_law(series.times, series.probabilities, window);
}

FitResult short_time_classify(std::span<const double> t, std::span<const double> p) {
  check_lengths(t, p);
  if (t.size() < 3) throw InvalidArgument("short-time classification needs at least 3 points");
  if (t.front() != 0.0)
    throw InvalidArgument("short-time grid must start at t = 0, got t0 = " +
                          std::to_string(t.front()));

  // u = 1 - p against t and t^2, no intercept.
  double s2 = 0.0, s3 = 0.0, s4 = 0.0, su1 = 0.0, su2 = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double x = t[i], u = 1.0 - p[i];
    s2 += x * x;
    s3 += x * x * x;
    s4 += x * x * x * x;
    su1 += x * u;
    su2 += x * x * u;
  }
  const double a = su1 / s2;
  const double b = su2 / s4;
  const double det = s2 * s4 - s3 * s3;
  if (!(s2 > 0.0) || !(det > 0.0)) throw FitError("short-time grid is degenerate");
  const double c1 = (su1 * s4 - su2 * s3) / det;

  double ss_lin = 0.0, ss_quad = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double u = 1.0 - p[i];
    ss_lin += (u - a * t[i]) * (u - a * t[i]);
    ss_quad += (u - b * t[i] * t[i]) * (u - b * t[i] * t[i]);
  }
  const auto n = static_cast<double>(t.size());
  const double rms_lin = std::sqrt(ss_lin / n);
  const double rms_quad = std::sqrt(ss_quad / n);

  FitResult r;
  r.window = {t.front(), t.back()};
  r.points = t.size();
  r.intercept = 1.0;
  r.slope_at_zero = -c1;
  if (rms_quad < rms_lin) {
    r.kind = FitKind::Quadratic;
    r.parameter = b;
    r.rms_residual = rms_quad;
  } else {
    r.kind = FitKind::Linear;
    r.parameter = a;
    r.rms_residual = rms_lin;
  }
  return r;
}

FitResult short_time_classify(const SurvivalSeries& series) {
  return short_time_classify(series.times, series.probabilities);
}

std::vector<RegrowthEvent> detect_regrowth(std::span<const double> t,
                                           std::span<const double> p) {
  check_lengths(t, p);
  if (p.size() < 3) throw InvalidArgument("regrowth detection needs at least 3 points");
  std::vector<std::size_t> minima;
  for (std::size_t i = 1; i + 1 < p.size(); ++i)
    if (strict_min(p, i)) minima.push_back(i);

  std::vector<RegrowthEvent> events;
  for (std::size_t k = 0; k < minima.size(); ++k) {
    const std::size_t lo = minima[k];
    const std::size_t hi = k + 1 < minima.size() ? minima[k + 1] : p.size() - 1;
    std::size_t peak = lo + 1;
    for (std::size_t i = lo + 1; i <= hi; ++i)
      if (p[i] > p[peak]) peak = i;
    RegrowthEvent e;
    e.t_min = t[lo];
    e.p_min = p[lo];
    e.t_peak = t[peak];
    e.p_peak = p[peak];
    e.gain = p[lo] > 0.0 ? p[peak] / p[lo] : std::numeric_limits<double>::infinity();
    events.push_back(e);
  }
  return events;
}

std::vector<RegrowthEvent> detect_regrowth(const SurvivalSeries& series) {
  return detect_regrowth(series.times, series.probabilities);
}

std::vector<std::size_t> local_maxima(std::span<const double> p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < p.size(); ++i)
    if (strict_max(p, i)) out.push_back(i);
  return out;
}

std::size_t count_local_maxima(const SurvivalSeries& series, TimeWindow window) {
  check_window(window);
  const double slack = window_slack(window);
  std::size_t count = 0;
  for (std::size_t i : local_maxima(series.probabilities)) {
    const double t = series.times[i];
    if (t >= window.lo - slack && t <= window.hi + slack) ++count;
  }
  return count;
}

PaleyWienerReport paley_wiener_checks(const SurvivalSeries& truncated) {
  PaleyWienerReport report;
  for (double m : {0.5, 1.0, 1.5}) {
    PowerIntegralCheck c;
    c.m = m;
    c.measured = power_integral(m);
    c.candidate_pi = std::numbers::pi / std::sin(m * std::numbers::pi / 2.0);
    c.candidate_two_pi = 2.0 * c.candidate_pi;
    report.power_integrals.push_back(c);
  }
  report.log_integral = log_integral();

  const std::size_t n = truncated.size();
  if (n < 2) return report;
  const double rate = truncated.params.half_width();
  report.exponential_rate = rate;
  const auto& t = truncated.times;
  const auto f_computed = [&](std::size_t i) {
    return std::abs(std::log(std::abs(truncated.amplitudes[i]))) / (1.0 + t[i] * t[i]);
  };
  const auto f_exponential = [&](std::size_t i) { return rate * std::abs(t[i]) / (1.0 + t[i] * t[i]); };

  // Trapezoid sums up to a quarter, half and all of the series.
  const std::size_t ends[] = {std::max<std::size_t>(1, (n - 1) / 4),
                              std::max<std::size_t>(1, (n - 1) / 2), n - 1};
  double acc_c = 0.0, acc_e = 0.0;
  std::size_t done = 0;
  for (std::size_t end : ends) {
    for (; done < end; ++done) {
      const double h = t[done + 1] - t[done];
      acc_c += 0.5 * h * (f_computed(done) + f_computed(done + 1));
      acc_e += 0.5 * h * (f_exponential(done) + f_exponential(done + 1));
    }
    if (!report.windowed.empty() && report.windowed.back().window_end == t[end]) continue;
    report.windowed.push_back({t[end], acc_c, acc_e});
  }
  return report;
}

PaleyWienerReport paley_wiener_checks() {
  ModelParams params;
  params.alpha = 0.2;
  params.vbar = 0.0564;
  params.include_vbar_sq = true;
  const SurvivalSeries series =
      survival_series(LowerTruncated{-1.0}, 0.0, 0.5, 401, params, true);
  return paley_wiener_checks(series);
}

}  // namespace qdecay
