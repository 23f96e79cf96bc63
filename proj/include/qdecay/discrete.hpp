#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qdecay/model.hpp"

namespace qdecay {

/// Initial state at omega_s coupled with strength vbar to the ladder
/// omega_k = omega_s + k epsilon, k = -m..m. No ladder-ladder coupling.
struct DiscreteSpectrum {
  int m = 0;
  double omega_s = 0.0;
  double epsilon = 0.1;
  double vbar = 0.0;

  double level(int k) const noexcept { return omega_s + k * epsilon; }
  std::size_t state_count() const noexcept { return 2 * static_cast<std::size_t>(m) + 2; }
  void validate() const;
};

/// Pulls m from the spec and omega_s, epsilon, vbar from the parameters
/// (epsilon and vbar must be present).
DiscreteSpectrum make_spectrum(const DiscreteLadder& ladder, const ModelParams& params);

/// Eigenfrequencies of the arrowhead Hamiltonian (ascending) and the squared
/// overlaps a_j^2 of each eigenvector with the initial state.
struct EigenSolution {
  std::vector<double> omega_primes;
  std::vector<double> weights;
  /// False for vbar = 0, where the eigenvectors are the bare states.
  bool coupled = true;
  /// Position of the initial state among omega_primes when uncoupled.
  std::size_t uncoupled_s_index = 0;
};

/// Roots of the secular equation
///   (omega_s - w) - vbar^2 sum_k 1 / (omega_k - w) = 0
/// by bisection, one per pole-bounded bracket, with weights from exact
/// finite normalization a_j^2 = 1 / (1 + vbar^2 sum_k (omega_k - w_j)^-2).
/// Throws NumericalError if a bracket yields no root or the result violates
/// interlacing or completeness.
EigenSolution solve_eigensystem(const DiscreteSpectrum& spec);

/// Infinite-ladder (cotangent) approximation of the weights,
///   a_j^2 ~ vbar^2 / (vbar^2 + (omega_s - w_j)^2 + (pi vbar^2 / epsilon)^2).
std::vector<double> weights_lorentzian_approx(const EigenSolution& eig,
                                              const DiscreteSpectrum& spec);

/// Ladder components b_k^j = -vbar a_j / (omega_k - w_j), k = -m..m, of
/// eigenvector j (a_j taken positive). Computed on request only.
std::vector<double> ladder_coefficients(const EigenSolution& eig, const DiscreteSpectrum& spec,
                                        std::size_t j);

/// A_s(t) = sum_j a_j^2 exp(-i w_j t).
std::complex<double> survival_amplitude_discrete(double t, const EigenSolution& eig);

}  // namespace qdecay
