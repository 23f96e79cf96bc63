#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qdecay/continuum.hpp"
#include "qdecay/errors.hpp"
#include "qdecay/model.hpp"

namespace qdecay {

inline constexpr double kCatalan = 0.915965594177219015054;

/// Energy moment <H^n> / hbar^n of the initial state.
struct MomentClass {
  enum class Kind { Zero, Infinite, Finite };

  Kind kind = Kind::Zero;
  double value = 0.0;  // only meaningful for Finite

  static MomentClass zero() { return {Kind::Zero, 0.0}; }
  static MomentClass infinite() { return {Kind::Infinite, 0.0}; }
  static MomentClass finite(double v) { return {Kind::Finite, v}; }
};

/// Full line: zero for odd n, infinite for even n (parity of the Lorentzian
/// and its 1/w^2 tails). Lower-truncated: infinite for every n >= 1.
/// Doubly-truncated: the integral of w^n M(w) over the limits (exactly 0 for
/// odd n with symmetric limits). Discrete: sum_j a_j^2 w_j^n.
MomentClass classify_moment(const ContinuumSpec& spec, const ModelParams& params, int n,
                            double abs_tol = kDefaultAbsTol);

enum class FitKind { Exponential, PowerLaw, Linear, Quadratic };

std::string_view fit_kind_name(FitKind kind);

struct TimeWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct FitResult {
  FitKind kind = FitKind::Exponential;
  /// Decay constant, power-law exponent, linear slope a, or curvature b.
  double parameter = 0.0;
  TimeWindow window;
  /// In log space for Exponential and PowerLaw, in p otherwise.
  double rms_residual = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
  /// dp/dt at t = 0 (short-time classification only).
  std::optional<double> slope_at_zero;
};

/// Raised for windows that cannot be fitted.
class FitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Least squares through (t, ln p); parameter = -slope.
FitResult fit_exponential(std::span<const double> t, std::span<const double> p, TimeWindow window);
FitResult fit_exponential(const SurvivalSeries& series, TimeWindow window);

/// Least squares through (ln t, ln p); parameter = -slope.
FitResult fit_power_law(std::span<const double> t, std::span<const double> p, TimeWindow window);
FitResult fit_power_law(const SurvivalSeries& series, TimeWindow window);

/// Fits p ~ 1 - a t and p ~ 1 - b t^2 to a grid starting at t = 0 and
/// returns whichever has the smaller residual. slope_at_zero comes from the
/// two-term fit 1 - p ~ c1 t + c2 t^2.
FitResult short_time_classify(std::span<const double> t, std::span<const double> p);
FitResult short_time_classify(const SurvivalSeries& series);

struct RegrowthEvent {
  double t_min = 0.0;
  double p_min = 0.0;
  double t_peak = 0.0;
  double p_peak = 0.0;
  double gain = 1.0;
};

/// One event per strict local minimum; its peak is the highest point before
/// the next strict local minimum (or the end of the series). Plateaus are
/// not extrema.
std::vector<RegrowthEvent> detect_regrowth(std::span<const double> t, std::span<const double> p);
std::vector<RegrowthEvent> detect_regrowth(const SurvivalSeries& series);

/// Indices of strict interior local maxima.
std::vector<std::size_t> local_maxima(std::span<const double> p);

/// Strict local maxima of the probabilities with t inside the window.
std::size_t count_local_maxima(const SurvivalSeries& series, TimeWindow window);

struct PowerIntegralCheck {
  double m = 0.0;
  /// 2 int_0^inf t^(m-1) / (1 + t^2) dt
  double measured = 0.0;
  double candidate_pi = 0.0;      // pi / sin(m pi / 2)
  double candidate_two_pi = 0.0;  // 2 pi / sin(m pi / 2)
};

struct WindowedFunctional {
  double window_end = 0.0;
  /// int |ln|A(t)|| / (1 + t^2) dt over the computed series up to window_end.
  double computed = 0.0;
  /// The same functional for exp(-rate t) on the same grid.
  double exponential = 0.0;
};

struct PaleyWienerReport {
  std::vector<PowerIntegralCheck> power_integrals;
  /// 2 int_0^inf |ln t| / (1 + t^2) dt, expected to be 4 G (Catalan).
  double log_integral = 0.0;
  double log_integral_expected = 4.0 * kCatalan;
  double exponential_rate = 0.0;
  std::vector<WindowedFunctional> windowed;
};

/// Closed-form integral checks plus the windowed log-amplitude functional of
/// a truncated-continuum series, reported against a pure exponential.
PaleyWienerReport paley_wiener_checks(const SurvivalSeries& truncated);

/// Same, on a default series: omega_min = -1, alpha = 0.2, vbar = 0.0564
/// in the denominator, t in [0, 200].
PaleyWienerReport paley_wiener_checks();

}  // namespace qdecay
