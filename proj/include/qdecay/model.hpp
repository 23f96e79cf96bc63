#pragma once

#include <optional>
#include <string_view>
#include <variant>

namespace qdecay {

/// Coupling parameters shared by every evaluator. Frequencies are angular
/// with hbar = 1.
///
/// `alpha` is the canonical decay rate. `epsilon` and `vbar` are optional
/// provenance fields; the discrete ladder needs both, and the Lorentzian
/// denominator needs `vbar` when `include_vbar_sq` is set.
struct ModelParams {
  double alpha = 0.2;
  std::optional<double> epsilon;
  std::optional<double> vbar;
  double omega_s = 0.0;
  bool include_vbar_sq = false;

  /// delta = alpha / 2, the Lorentzian half-width without the V^2 term.
  double half_width() const noexcept { return 0.5 * alpha; }

  /// Constant term of the Lorentzian denominator: delta^2, plus vbar^2 when
  /// the flag is set.
  double denominator_shift() const noexcept;

  /// Square root of denominator_shift(); the decay rate of the full-line
  /// amplitude.
  double effective_width() const noexcept;

  /// Throws InvalidArgument unless the parameters are usable by an evaluator.
  void validate() const;
};

/// Builds parameters from the ladder coupling: alpha = 2 pi vbar^2 / epsilon.
/// vbar = 0 yields alpha = 0, the uncoupled limit, which evaluators reject.
ModelParams params_from_coupling(double vbar, double epsilon);

/// M(omega) = (alpha / 2 pi) / (omega^2 + delta^2 [+ vbar^2]).
double lorentzian_density(double omega, const ModelParams& params);

struct FullLine {};

struct LowerTruncated {
  double omega_min = 0.0;
};

struct DoublyTruncated {
  double omega_min = 0.0;
  double omega_max = 0.0;

  bool symmetric() const noexcept { return omega_min == -omega_max; }
};

/// 2m+1 equally spaced levels plus the initial state.
struct DiscreteLadder {
  int m = 0;
};

using ContinuumSpec =
    std::variant<FullLine, LowerTruncated, DoublyTruncated, DiscreteLadder>;

void validate(const ContinuumSpec& spec);

/// Stable lowercase identifier ("full", "lower_truncated", ...).
std::string_view kind_name(const ContinuumSpec& spec);

}  // namespace qdecay
