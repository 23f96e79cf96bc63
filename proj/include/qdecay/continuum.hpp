#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "qdecay/model.hpp"
#include "qdecay/quadrature.hpp"

namespace qdecay {

struct EigenSolution;

/// Survival amplitudes on a uniform grid t_i = t0 + i dt.
///
/// `raw_amplitudes` hold the bare integral; `amplitudes` are divided by the
/// raw t = 0 amplitude when `normalized` is set (otherwise identical), and
/// `probabilities[i] = |amplitudes[i]|^2`.
struct SurvivalSeries {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<double> times;
  std::vector<std::complex<double>> raw_amplitudes;
  std::vector<std::complex<double>> amplitudes;
  std::vector<double> probabilities;
  bool normalized = false;
  /// Raw A(0); the divisor applied when normalized.
  double raw_at_zero = 1.0;
  ContinuumSpec spec;
  ModelParams params;

  std::size_t size() const noexcept { return times.size(); }
};

/// Full line: exp(-i omega_s t) (delta/gamma) exp(-gamma |t|), gamma^2 = delta^2 [+ vbar^2].
/// Without the vbar^2 term this is exp(-i omega_s t) exp(-alpha |t| / 2).
std::complex<double> amplitude_full(double t, const ModelParams& params);

/// Continuum [omega_min, inf), as the full-line closed form minus the lower
/// tail (-inf, omega_min]. Raw, so A(0) < 1.
std::complex<double> amplitude_truncated(double t, double omega_min, const ModelParams& params,
                                         double abs_tol = kDefaultAbsTol);

/// Continuum [omega_min, omega_max] by Filon quadrature. Raw.
std::complex<double> amplitude_doubly_truncated(double t, double omega_min, double omega_max,
                                                const ModelParams& params,
                                                double abs_tol = kDefaultAbsTol);

/// Symmetric continuum [-omega_max, omega_max] from the partial-fraction
/// split of the Lorentzian and the complex cosine/sine integrals:
///
///   int cos(w t) / (w + i g) dw = cosh(g t) Ci((w + i g) t) + i sinh(g t) Si((w + i g) t)
///
/// evaluated between the limits. Raw.
std::complex<double> amplitude_doubly_truncated_closed(double t, double omega_max,
                                                       const ModelParams& params);

/// Same, but checks that the limits are symmetric and throws otherwise.
std::complex<double> amplitude_doubly_truncated_closed(double t, double omega_min,
                                                       double omega_max,
                                                       const ModelParams& params);

/// Exponential and tail pieces of the truncated amplitude:
/// amplitude_truncated = exponential_term - tail_term.
struct InterferenceSplit {
  std::complex<double> exponential_term;
  std::complex<double> tail_term;
};

InterferenceSplit decomposition_components(double t, double omega_min, const ModelParams& params,
                                           double abs_tol = kDefaultAbsTol);

/// Raw amplitude for any spec. Built once per (spec, params); the discrete
/// ladder is diagonalized in the constructor. Immutable and thread-safe.
class AmplitudeEvaluator {
 public:
  AmplitudeEvaluator(ContinuumSpec spec, ModelParams params, double abs_tol = kDefaultAbsTol);
  ~AmplitudeEvaluator();
  AmplitudeEvaluator(AmplitudeEvaluator&&) noexcept;
  AmplitudeEvaluator& operator=(AmplitudeEvaluator&&) noexcept;

  std::complex<double> raw(double t) const;
  /// Raw A(0), real and positive.
  double at_zero() const noexcept { return at_zero_; }
  /// raw(t) / at_zero().
  std::complex<double> normalized(double t) const { return raw(t) / at_zero_; }

  const ContinuumSpec& spec() const noexcept { return spec_; }
  const ModelParams& params() const noexcept { return params_; }

 private:
  ContinuumSpec spec_;
  ModelParams params_;
  double abs_tol_;
  std::unique_ptr<EigenSolution> eigen_;
  double at_zero_ = 1.0;
};

/// Evaluates the amplitude on t0, t0 + dt, ..., t0 + (n-1) dt. Points are
/// computed concurrently and stored in time order. A failure is rethrown as
/// SeriesError naming the first failing index.
SurvivalSeries survival_series(const ContinuumSpec& spec, double t0, double dt, std::size_t n,
                               const ModelParams& params, bool normalize,
                               double abs_tol = kDefaultAbsTol);

/// |A(t + t') - A(t) A(t')| on normalized amplitudes. Vanishes identically
/// for a pure exponential.
double semigroup_defect(double t, double t_prime, const ContinuumSpec& spec,
                        const ModelParams& params, double abs_tol = kDefaultAbsTol);

}  // namespace qdecay
