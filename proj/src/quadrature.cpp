#include "qdecay/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

namespace qdecay {

namespace {

using cplx = std::complex<double>;

// Smallest panel (relative to its position) that is still split.
constexpr double kMinRelativeWidth = 64.0 * std::numeric_limits<double>::epsilon();

// Far from the origin the density varies on the scale |omega| itself, so
// initial panels may grow geometrically there.
constexpr double kGrowthDivisor = 9.0;

// int_{-1}^{1} s^k exp(-i theta s) ds = {w0, -i w1, w2} for k = 0, 1, 2.
struct FilonWeights {
  double w0;
  double w1;
  double w2;
};

FilonWeights filon_weights(double theta) {
  const double th = std::abs(theta);
  FilonWeights w{};
  if (th < 1.0) {
    // Closed forms cancel badly for small theta; sum the Taylor series.
    double even = 1.0;  // th^(2k) / (2k)!
    double sign = 1.0;
    for (int k = 0; k < 30; ++k) {
      const double odd = even * th / (2.0 * k + 1.0);  // th^(2k+1) / (2k+1)!
      w.w0 += sign * even / (2.0 * k + 1.0);
      w.w2 += sign * even / (2.0 * k + 3.0);
      w.w1 += sign * odd / (2.0 * k + 3.0);
      even *= th * th / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
      sign = -sign;
      if (even < 1e-20) break;
    }
    w.w0 *= 2.0;
    w.w1 *= 2.0;
    w.w2 *= 2.0;
  } else {
    const double s = std::sin(th);
    const double c = std::cos(th);
    w.w0 = 2.0 * s / th;
    w.w1 = 2.0 * (s - th * c) / (th * th);
    w.w2 = 2.0 * ((th * th - 2.0) * s + 2.0 * th * c) / (th * th * th);
  }
  if (theta < 0.0) w.w1 = -w.w1;
  return w;
}

// Quadratic Filon rule for one panel given the density at its ends and middle.
cplx filon_panel(double lo, double hi, double f0, double f1, double f2, double t) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const FilonWeights w = filon_weights(half * t);
  const double slope = 0.5 * (f2 - f0);
  const double curv = 0.5 * (f2 - 2.0 * f1 + f0);
  const cplx inner(f1 * w.w0 + curv * w.w2, -slope * w.w1);
  return half * std::polar(1.0, -mid * t) * inner;
}

struct Panel {
  double lo;
  double hi;
  cplx value;
  double error;
};

struct ByError {
  bool operator()(const Panel& a, const Panel& b) const { return a.error < b.error; }
};

Panel evaluate_panel(double lo, double hi, double t, const ModelParams& params) {
  const double mid = 0.5 * (lo + hi);
  const double q1 = 0.5 * (lo + mid);
  const double q3 = 0.5 * (mid + hi);
  const double f0 = lorentzian_density(lo, params);
  const double f1 = lorentzian_density(q1, params);
  const double f2 = lorentzian_density(mid, params);
  const double f3 = lorentzian_density(q3, params);
  const double f4 = lorentzian_density(hi, params);
  const cplx coarse = filon_panel(lo, hi, f0, f2, f4, t);
  const cplx fine = filon_panel(lo, mid, f0, f1, f2, t) + filon_panel(mid, hi, f2, f3, f4, t);
  return Panel{lo, hi, fine, std::abs(fine - coarse)};
}

std::vector<double> initial_partition(double a, double b, double t) {
  const double span = b - a;
  const double base = std::min(span / 16.0, std::numbers::pi / (4.0 * std::max(t, 1.0)));
  std::vector<double> nodes{a};
  double x = a;
  while (x < b) {
    const double reach = x < 0.0 ? -x / kGrowthDivisor : x / (kGrowthDivisor - 1.0);
    const double width = std::min(span / 16.0, std::max(base, reach));
    x = (b - x <= 1.5 * width) ? b : x + width;
    nodes.push_back(x);
  }
  return nodes;
}

struct FilonOutcome {
  cplx value;
  double error;
  std::size_t panels;
  bool converged;
};

// Globally adaptive Filon integration on [a, b] for t >= 0.
FilonOutcome adaptive_filon(double a, double b, double t, const ModelParams& params,
                            double target) {
  std::priority_queue<Panel, std::vector<Panel>, ByError> open;
  std::vector<Panel> frozen;
  const std::vector<double> nodes = initial_partition(a, b, t);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    Panel p = evaluate_panel(nodes[i], nodes[i + 1], t, params);
    total += p.error;
    open.push(p);
  }
  std::size_t count = nodes.size() - 1;

  while (total > target && !open.empty() && count < kPanelBudget) {
    Panel worst = open.top();
    open.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const double scale = std::max({std::abs(worst.lo), std::abs(worst.hi), 1e-300});
    if (worst.hi - worst.lo <= kMinRelativeWidth * scale || mid <= worst.lo || mid >= worst.hi) {
      frozen.push_back(worst);
      continue;
    }
    Panel left = evaluate_panel(worst.lo, mid, t, params);
    Panel right = evaluate_panel(mid, worst.hi, t, params);
    total += left.error + right.error - worst.error;
    open.push(left);
    open.push(right);
    ++count;
  }

  std::vector<Panel> all = std::move(frozen);
  all.reserve(all.size() + open.size());
  while (!open.empty()) {
    all.push_back(open.top());
    open.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.lo < y.lo; });

  // Kahan summation in left-to-right order keeps results reproducible.
  cplx sum{}, comp{};
  double err = 0.0;
  for (const Panel& p : all) {
    const cplx y = p.value - comp;
    const cplx s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    err += p.error;
  }
  return FilonOutcome{sum, err, all.size(), err <= target};
}

// int_a^b M(omega) d omega from the arctan antiderivative.
double density_mass(double a, double b, const ModelParams& params) {
  const double g = params.effective_width();
  const double scale = params.alpha / (2.0 * std::numbers::pi * g);
  return scale * (std::atan(b / g) - std::atan(a / g));
}

// int_{-inf}^{b} M(omega) d omega, avoiding cancellation for very negative b.
double density_lower_mass(double b, const ModelParams& params) {
  const double g = params.effective_width();
  const double scale = params.alpha / (2.0 * std::numbers::pi * g);
  if (std::isinf(b)) return b < 0.0 ? 0.0 : scale * std::numbers::pi;
  const double x = b / g;
  if (x < 0.0) return scale * -std::atan(1.0 / x);
  return scale * (0.5 * std::numbers::pi + std::atan(x));
}

void check_common(double t, double abs_tol, const ModelParams& params) {
  params.validate();
  if (!std::isfinite(t)) throw InvalidArgument("time must be finite");
  if (!(abs_tol > 0.0) || !std::isfinite(abs_tol))
    throw InvalidArgument("abs_tol must be finite and > 0");
}

QuadratureResult conjugated(QuadratureResult r) {
  r.value = std::conj(r.value);
  return r;
}

}  // namespace

double lower_tail_bound(double cutoff, double t, const ModelParams& params) {
  if (!(cutoff < 0.0)) throw InvalidArgument("tail cutoff must be negative");
  if (std::isinf(cutoff)) return 0.0;
  // |M(omega)| <= (alpha / 2 pi) / omega^2 gives the plain mass bound.
  double bound = params.alpha / (2.0 * std::numbers::pi) / std::abs(cutoff);
  if (t != 0.0) {
    // M is monotone on (-inf, cutoff]; the second mean value theorem bounds
    // the cosine and sine parts by 2 M(cutoff) / |t| each.
    const double osc = 2.0 * std::numbers::sqrt2 * lorentzian_density(cutoff, params) / std::abs(t);
    bound = std::min(bound, osc);
  }
  return bound;
}

QuadratureResult fourier_finite(double a, double b, double t, const ModelParams& params,
                                double abs_tol) {
  check_common(t, abs_tol, params);
  if (!std::isfinite(a) || !std::isfinite(b)) throw InvalidArgument("limits must be finite");
  if (!(a < b)) throw InvalidArgument("lower limit must be below upper limit");
  if (t < 0.0) return conjugated(fourier_finite(a, b, -t, params, abs_tol));

  QuadratureResult result;
  if (t == 0.0) {
    result.value = density_mass(a, b, params);
    return result;
  }
  if (a == -b) {
    const FilonOutcome half = adaptive_filon(0.0, b, t, params, 0.5 * abs_tol);
    result.value = 2.0 * half.value.real();
    result.est_error = 2.0 * half.error;
    result.panels_used = 2 * half.panels;
    if (!half.converged) throw QuadratureError("fourier_finite: panel budget exhausted", result);
    return result;
  }
  const FilonOutcome out = adaptive_filon(a, b, t, params, abs_tol);
  result.value = out.value;
  result.est_error = out.error;
  result.panels_used = out.panels;
  if (!out.converged) throw QuadratureError("fourier_finite: panel budget exhausted", result);
  return result;
}

QuadratureResult fourier_semi_infinite_lower_tail(double b, double t, const ModelParams& params,
                                                  double abs_tol) {
  check_common(t, abs_tol, params);
  if (std::isnan(b) || b == std::numeric_limits<double>::infinity())
    throw InvalidArgument("tail endpoint must be finite or -inf");
  if (t < 0.0) return conjugated(fourier_semi_infinite_lower_tail(b, -t, params, abs_tol));

  QuadratureResult result;
  if (t == 0.0) {
    result.value = density_lower_mass(b, params);
    return result;
  }
  if (std::isinf(b)) return result;
  if (b < 0.0) {
    const double whole = lower_tail_bound(b, t, params);
    if (whole <= 0.5 * abs_tol) {
      result.est_error = whole;
      result.truncation_cutoff = b;
      return result;
    }
  }

  const double plain = params.alpha / (std::numbers::pi * abs_tol);
  const double osc_sq = 2.0 * std::numbers::sqrt2 * params.alpha / (std::numbers::pi * t * abs_tol) -
                        params.denominator_shift();
  const double reach = std::min(plain, std::sqrt(std::max(osc_sq, 0.0)));
  const double cutoff = std::min({-reach, b - 1.0, -1.0});

  const FilonOutcome out = adaptive_filon(cutoff, b, t, params, 0.5 * abs_tol);
  result.value = out.value;
  result.est_error = out.error + lower_tail_bound(cutoff, t, params);
  result.panels_used = out.panels;
  result.truncation_cutoff = cutoff;
  if (!out.converged)
    throw QuadratureError("fourier_semi_infinite_lower_tail: panel budget exhausted", result);
  return result;
}

QuadratureResult integrate(const IntegrationRequest& request) {
  const double a = request.lower;
  const double b = request.upper;
  if (std::isnan(a) || std::isnan(b) || !(a < b))
    throw InvalidArgument("integration request needs lower < upper");
  const bool lower_inf = std::isinf(a);
  const bool upper_inf = std::isinf(b);
  if (lower_inf && upper_inf) {
    check_common(request.t, request.abs_tol, request.density);
    const double g = request.density.effective_width();
    QuadratureResult r;
    r.value = request.density.alpha / (2.0 * g) * std::exp(-g * std::abs(request.t));
    return r;
  }
  if (lower_inf)
    return fourier_semi_infinite_lower_tail(b, request.t, request.density, request.abs_tol);
  if (upper_inf) {
    // omega -> -omega maps [a, inf) onto (-inf, -a] and flips the sign of t.
    return conjugated(
        fourier_semi_infinite_lower_tail(-a, request.t, request.density, request.abs_tol));
  }
  return fourier_finite(a, b, request.t, request.density, request.abs_tol);
}

}  // namespace qdecay
