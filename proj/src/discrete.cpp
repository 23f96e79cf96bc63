#include "qdecay/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qdecay/errors.hpp"

namespace qdecay {

namespace {

constexpr double kCompletenessTol = 1e-10;
constexpr int kMaxWidening = 200;

double secular(double w, const DiscreteSpectrum& spec) {
  double sum = 0.0;
  for (int k = -spec.m; k <= spec.m; ++k) sum += 1.0 / (spec.level(k) - w);
  return (spec.omega_s - w) - spec.vbar * spec.vbar * sum;
}

// The secular function decreases strictly between poles. `lo` sits where it
// is positive (or at a pole approached from the right), `hi` where it is
// negative (or at a pole approached from the left). Pole endpoints are never
// evaluated. Runs until the bracket cannot be split further.
double bisect(double lo, double hi, const DiscreteSpectrum& spec) {
  while (true) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (secular(mid, spec) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double exact_weight(double w, const DiscreteSpectrum& spec) {
  double sum = 0.0;
  for (int k = -spec.m; k <= spec.m; ++k) {
    const double d = spec.level(k) - w;
    sum += 1.0 / (d * d);
  }
  return 1.0 / (1.0 + spec.vbar * spec.vbar * sum);
}

EigenSolution uncoupled(const DiscreteSpectrum& spec) {
  EigenSolution eig;
  eig.coupled = false;
  for (int k = -spec.m; k <= spec.m; ++k) eig.omega_primes.push_back(spec.level(k));
  const auto pos = std::lower_bound(eig.omega_primes.begin(), eig.omega_primes.end(), spec.omega_s);
  eig.uncoupled_s_index = static_cast<std::size_t>(pos - eig.omega_primes.begin());
  eig.omega_primes.insert(pos, spec.omega_s);
  eig.weights.assign(eig.omega_primes.size(), 0.0);
  eig.weights[eig.uncoupled_s_index] = 1.0;
  return eig;
}

}  // namespace

void DiscreteSpectrum::validate() const {
  if (m < 0) throw InvalidArgument("ladder half-count m must be >= 0");
  if (!(std::isfinite(epsilon) && epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  if (!(std::isfinite(vbar) && vbar >= 0.0)) throw InvalidArgument("vbar must be >= 0");
  if (!std::isfinite(omega_s)) throw InvalidArgument("omega_s must be finite");
}

DiscreteSpectrum make_spectrum(const DiscreteLadder& ladder, const ModelParams& params) {
  if (!params.epsilon || !params.vbar)
    throw InvalidArgument("the discrete ladder needs both epsilon and vbar");
  DiscreteSpectrum spec{ladder.m, params.omega_s, *params.epsilon, *params.vbar};
  spec.validate();
  return spec;
}

EigenSolution solve_eigensystem(const DiscreteSpectrum& spec) {
  spec.validate();
  if (spec.vbar == 0.0) return uncoupled(spec);

  EigenSolution eig;
  eig.omega_primes.reserve(spec.state_count());

  const double bottom = spec.level(-spec.m);
  const double top = spec.level(spec.m);
  const double reach =
      spec.vbar * spec.vbar * (2.0 * spec.m + 1.0) / spec.epsilon + std::abs(spec.omega_s - bottom) + 1.0;

  double lo = bottom - reach;
  for (int i = 0; secular(lo, spec) <= 0.0; ++i) {
    if (i == kMaxWidening) throw NumericalError("no eigenvalue found below the ladder");
    lo = bottom - 2.0 * (bottom - lo);
  }
  eig.omega_primes.push_back(bisect(lo, bottom, spec));

  for (int k = -spec.m; k < spec.m; ++k) eig.omega_primes.push_back(bisect(spec.level(k), spec.level(k + 1), spec));

  const double reach_up =
      spec.vbar * spec.vbar * (2.0 * spec.m + 1.0) / spec.epsilon + std::abs(spec.omega_s - top) + 1.0;
  double hi = top + reach_up;
  for (int i = 0; secular(hi, spec) >= 0.0; ++i) {
    if (i == kMaxWidening) throw NumericalError("no eigenvalue found above the ladder");
    hi = top + 2.0 * (hi - top);
  }
  eig.omega_primes.push_back(bisect(top, hi, spec));

  if (eig.omega_primes.size() != spec.state_count())
    throw NumericalError("eigenvalue count " + std::to_string(eig.omega_primes.size()) +
                         " differs from " + std::to_string(spec.state_count()));

  // Interlacing: one root below the ladder, one in each gap, one above.
  for (std::size_t j = 0; j < eig.omega_primes.size(); ++j) {
    const double w = eig.omega_primes[j];
    const bool below_ok = j == 0 || w >= spec.level(static_cast<int>(j) - 1 - spec.m);
    const bool above_ok = j + 1 == eig.omega_primes.size() || w <= spec.level(static_cast<int>(j) - spec.m);
    if (!below_ok || !above_ok) throw NumericalError("eigenvalues do not interlace the ladder");
  }

  eig.weights.reserve(eig.omega_primes.size());
  double total = 0.0;
  for (double w : eig.omega_primes) {
    eig.weights.push_back(exact_weight(w, spec));
    total += eig.weights.back();
  }
  if (std::abs(total - 1.0) > kCompletenessTol)
    throw NumericalError("overlap weights sum to " + std::to_string(total) + ", not 1");
  return eig;
}

std::vector<double> weights_lorentzian_approx(const EigenSolution& eig,
                                              const DiscreteSpectrum& spec) {
  const double v2 = spec.vbar * spec.vbar;
  const double width = std::numbers::pi * v2 / spec.epsilon;
  std::vector<double> out;
  out.reserve(eig.omega_primes.size());
  for (double w : eig.omega_primes) {
    const double d = spec.omega_s - w;
    out.push_back(v2 / (v2 + d * d + width * width));
  }
  return out;
}

std::vector<double> ladder_coefficients(const EigenSolution& eig, const DiscreteSpectrum& spec,
                                        std::size_t j) {
  if (j >= eig.omega_primes.size()) throw InvalidArgument("eigenvector index out of range");
  std::vector<double> b(2 * static_cast<std::size_t>(spec.m) + 1, 0.0);
  if (!eig.coupled) {
    if (j != eig.uncoupled_s_index) b[j < eig.uncoupled_s_index ? j : j - 1] = 1.0;
    return b;
  }
  const double a = std::sqrt(eig.weights[j]);
  for (int k = -spec.m; k <= spec.m; ++k)
    b[static_cast<std::size_t>(k + spec.m)] = -spec.vbar * a / (spec.level(k) - eig.omega_primes[j]);
  return b;
}

std::complex<double> survival_amplitude_discrete(double t, const EigenSolution& eig) {
  std::complex<double> sum{};
  for (std::size_t j = 0; j < eig.omega_primes.size(); ++j)
    sum += eig.weights[j] * std::polar(1.0, -eig.omega_primes[j] * t);
  return sum;
}

}  // namespace qdecay
