#include "qdecay/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <thread>

#include "qdecay/discrete.hpp"
#include "qdecay/errors.hpp"
#include "qdecay/specfun.hpp"

namespace qdecay {

namespace {

using cplx = std::complex<double>;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

cplx phase(double t, const ModelParams& params) {
  return params.omega_s == 0.0 ? cplx(1.0, 0.0) : std::polar(1.0, -params.omega_s * t);
}

// Unphased full-line integral  int M(w) exp(-i w t) dw.
double full_line_integral(double t, const ModelParams& params) {
  const double g = params.effective_width();
  return params.alpha / (2.0 * g) * std::exp(-g * std::abs(t));
}

// Runs body(i) for i in [0, n) on a few threads; returns the lowest failing
// index with its exception, if any.
template <class Body>
void parallel_indices(std::size_t n, Body body) {
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(n, 1));
  std::vector<std::exception_ptr> failures(workers);
  std::vector<std::size_t> failed_at(workers, n);
  auto run = [&](std::size_t w) {
    for (std::size_t i = w; i < n; i += workers) {
      try {
        body(i);
      } catch (...) {
        failures[w] = std::current_exception();
        failed_at[w] = i;
        return;
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  std::size_t first = n;
  std::exception_ptr error;
  for (std::size_t w = 0; w < workers; ++w) {
    if (failures[w] && failed_at[w] < first) {
      first = failed_at[w];
      error = failures[w];
    }
  }
  if (error) {
    try {
      std::rethrow_exception(error);
    } catch (const std::exception& e) {
      throw SeriesError(e.what(), first, 0.0);
    }
  }
}

}  // namespace

cplx amplitude_full(double t, const ModelParams& params) {
  params.validate();
  if (!std::isfinite(t)) throw InvalidArgument("time must be finite");
  return phase(t, params) * full_line_integral(t, params);
}

InterferenceSplit decomposition_components(double t, double omega_min, const ModelParams& params,
                                           double abs_tol) {
  params.validate();
  if (!std::isfinite(omega_min)) throw InvalidArgument("omega_min must be finite");
  const cplx ph = phase(t, params);
  const QuadratureResult tail = fourier_semi_infinite_lower_tail(omega_min, t, params, abs_tol);
  return {ph * full_line_integral(t, params), ph * tail.value};
}

cplx amplitude_truncated(double t, double omega_min, const ModelParams& params, double abs_tol) {
  const InterferenceSplit split = decomposition_components(t, omega_min, params, abs_tol);
  return split.exponential_term - split.tail_term;
}

cplx amplitude_doubly_truncated(double t, double omega_min, double omega_max,
                                const ModelParams& params, double abs_tol) {
  const QuadratureResult r = fourier_finite(omega_min, omega_max, t, params, abs_tol);
  return phase(t, params) * r.value;
}

cplx amplitude_doubly_truncated_closed(double t, double omega_max, const ModelParams& params) {
  params.validate();
  if (!(std::isfinite(omega_max) && omega_max > 0.0))
    throw InvalidArgument("omega_max must be finite and > 0");
  if (!std::isfinite(t)) throw InvalidArgument("time must be finite");
  const double g = params.effective_width();
  const double prefactor = params.alpha / (2.0 * std::numbers::pi);
  const double tt = std::abs(t);  // the cosine integral is even in t
  if (tt == 0.0) return prefactor * 2.0 / g * std::atan(omega_max / g);

  const double ch = std::cosh(g * tt);
  const double sh = std::sinh(g * tt);
  if (!std::isfinite(ch)) throw NumericalError("closed form overflows: g*t too large");
  // Antiderivative of cos(w t) / (w + i g) in w.
  auto antiderivative = [&](double w) {
    const cplx z(w * tt, g * tt);
    return ch * cosint(z) + cplx(0.0, sh) * sinint(z);
  };
  // 1/(w^2 + g^2) = (i / 2g) [1/(w + ig) - 1/(w - ig)], and the second piece
  // is the conjugate of the first for real w and t.
  const cplx delta = antiderivative(omega_max) - antiderivative(-omega_max);
  return phase(t, params) * (prefactor * (-delta.imag() / g));
}

cplx amplitude_doubly_truncated_closed(double t, double omega_min, double omega_max,
                                       const ModelParams& params) {
  if (omega_min != -omega_max)
    throw InvalidArgument("closed form requires symmetric limits omega_min = -omega_max");
  return amplitude_doubly_truncated_closed(t, omega_max, params);
}

AmplitudeEvaluator::AmplitudeEvaluator(ContinuumSpec spec, ModelParams params, double abs_tol)
    : spec_(spec), params_(params), abs_tol_(abs_tol) {
  validate(spec_);
  if (!(abs_tol_ > 0.0)) throw InvalidArgument("abs_tol must be > 0");
  if (const auto* ladder = std::get_if<DiscreteLadder>(&spec_)) {
    const DiscreteSpectrum ds = make_spectrum(*ladder, params_);
    eigen_ = std::make_unique<EigenSolution>(solve_eigensystem(ds));
  } else {
    params_.validate();
  }
  at_zero_ = raw(0.0).real();
  if (!(at_zero_ > 0.0)) throw NumericalError("t = 0 amplitude is not positive");
}

AmplitudeEvaluator::~AmplitudeEvaluator() = default;
AmplitudeEvaluator::AmplitudeEvaluator(AmplitudeEvaluator&&) noexcept = default;
AmplitudeEvaluator& AmplitudeEvaluator::operator=(AmplitudeEvaluator&&) noexcept = default;

cplx AmplitudeEvaluator::raw(double t) const {
  return std::visit(
      overloaded{
          [&](const FullLine&) { return amplitude_full(t, params_); },
          [&](const LowerTruncated& s) {
            return amplitude_truncated(t, s.omega_min, params_, abs_tol_);
          },
          [&](const DoublyTruncated& s) {
            return amplitude_doubly_truncated(t, s.omega_min, s.omega_max, params_, abs_tol_);
          },
          [&](const DiscreteLadder&) { return survival_amplitude_discrete(t, *eigen_); },
      },
      spec_);
}

SurvivalSeries survival_series(const ContinuumSpec& spec, double t0, double dt, std::size_t n,
                               const ModelParams& params, bool normalize, double abs_tol) {
  if (!(std::isfinite(dt) && dt > 0.0)) throw InvalidArgument("time step dt must be > 0");
  if (n < 1) throw InvalidArgument("series needs at least one point");
  if (!std::isfinite(t0)) throw InvalidArgument("t0 must be finite");

  const AmplitudeEvaluator eval(spec, params, abs_tol);

  SurvivalSeries s;
  s.t0 = t0;
  s.dt = dt;
  s.spec = spec;
  s.params = params;
  s.normalized = normalize;
  s.raw_at_zero = eval.at_zero();
  s.times.resize(n);
  s.raw_amplitudes.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.times[i] = t0 + static_cast<double>(i) * dt;

  try {
    parallel_indices(n, [&](std::size_t i) { s.raw_amplitudes[i] = eval.raw(s.times[i]); });
  } catch (const SeriesError& e) {
    throw SeriesError("amplitude evaluation failed at index " + std::to_string(e.index()) +
                          " (t = " + std::to_string(s.times[e.index()]) + "): " + e.what(),
                      e.index(), s.times[e.index()]);
  }

  const double scale = normalize ? s.raw_at_zero : 1.0;
  s.amplitudes.resize(n);
  s.probabilities.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.amplitudes[i] = s.raw_amplitudes[i] / scale;
    s.probabilities[i] = std::norm(s.amplitudes[i]);
  }
  return s;
}

double semigroup_defect(double t, double t_prime, const ContinuumSpec& spec,
                        const ModelParams& params, double abs_tol) {
  if (!(t >= 0.0 && t_prime >= 0.0)) throw InvalidArgument("defect times must be >= 0");
  const AmplitudeEvaluator eval(spec, params, abs_tol);
  return std::abs(eval.normalized(t + t_prime) - eval.normalized(t) * eval.normalized(t_prime));
}

}  // namespace qdecay
