#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>

#include "qdecay/errors.hpp"
#include "qdecay/model.hpp"

namespace qdecay {

inline constexpr double kDefaultAbsTol = 1e-10;

/// Upper bound on Filon panels per integral before giving up.
inline constexpr std::size_t kPanelBudget = 500000;

/// One integral  int_lower^upper M(omega) exp(-i omega t) d omega  of the
/// Lorentzian density. Either endpoint may be infinite.
struct IntegrationRequest {
  double lower = 0.0;
  double upper = 0.0;
  double t = 0.0;
  double abs_tol = kDefaultAbsTol;
  ModelParams density;
};

struct QuadratureResult {
  std::complex<double> value{};
  double est_error = 0.0;
  std::size_t panels_used = 0;
  /// Finite replacement for an infinite endpoint, when one was needed.
  std::optional<double> truncation_cutoff;
};

/// Raised when the panel budget runs out; carries the best estimate so far.
class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, QuadratureResult best)
      : NumericalError(what), best_(best) {}

  const QuadratureResult& best_estimate() const noexcept { return best_; }

 private:
  QuadratureResult best_;
};

/// Dispatches on which endpoints are infinite.
QuadratureResult integrate(const IntegrationRequest& request);

/// Integral over a finite interval [a, b].
///
/// Each panel interpolates the density by a quadratic and integrates it
/// against exp(-i omega t) exactly, so cost does not grow with t. Panels are
/// refined adaptively (worst estimated error first) until the summed
/// estimate is below abs_tol. Symmetric limits (a == -b) are folded onto
/// [0, b], which makes the result exactly real. t = 0 uses the arctan
/// antiderivative; negative t uses conjugation.
QuadratureResult fourier_finite(double a, double b, double t, const ModelParams& params,
                                double abs_tol = kDefaultAbsTol);

/// Integral over (-inf, b].
///
/// The infinite part is cut at a point where an analytic bound on the
/// discarded tail drops below abs_tol / 2; that bound is included in
/// est_error and the cut point is reported as truncation_cutoff.
QuadratureResult fourier_semi_infinite_lower_tail(double b, double t, const ModelParams& params,
                                                  double abs_tol = kDefaultAbsTol);

/// Certified bound on |int_{-inf}^{c} M(omega) exp(-i omega t) d omega| for c < 0.
double lower_tail_bound(double cutoff, double t, const ModelParams& params);

}  // namespace qdecay
