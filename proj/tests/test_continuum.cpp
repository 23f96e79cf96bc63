#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qdecay/continuum.hpp"
#include "qdecay/discrete.hpp"
#include "qdecay/errors.hpp"

using namespace qdecay;
using cplx = std::complex<double>;

namespace {

ModelParams figure_params() {
  ModelParams p;
  p.alpha = 0.2;
  p.vbar = 0.0564;
  p.include_vbar_sq = true;
  return p;
}

ModelParams plain() {
  ModelParams p;
  p.alpha = 0.2;
  return p;
}

}  // namespace

TEST_SUITE("continuum") {
  TEST_CASE("full line is exponential") {
    const ModelParams p = plain();
    for (double t : {0.0, 1.0, 10.0, 60.0}) {
      CHECK(amplitude_full(t, p).real() == doctest::Approx(std::exp(-0.1 * t)).epsilon(1e-15));
      CHECK(amplitude_full(t, p).imag() == 0.0);
      CHECK(std::norm(amplitude_full(t, p)) == doctest::Approx(std::exp(-0.2 * t)).epsilon(1e-14));
    }
    CHECK(amplitude_full(-3.0, p) == amplitude_full(3.0, p));
    ModelParams shifted = p;
    shifted.omega_s = 0.7;
    const cplx a = amplitude_full(2.0, shifted);
    CHECK(std::arg(a) == doctest::Approx(-1.4));
    CHECK(std::abs(a) == doctest::Approx(std::exp(-0.2)));
  }

  TEST_CASE("full line with vbar^2 in the denominator") {
    const ModelParams p = figure_params();
    const double g = p.effective_width();
    CHECK(amplitude_full(0.0, p).real() == doctest::Approx(0.1 / g));
    CHECK(amplitude_full(5.0, p).real() == doctest::Approx(0.1 / g * std::exp(-5.0 * g)));
  }

  TEST_CASE("truncated continuum against brute force") {
    const ModelParams p = figure_params();
    for (double wmin : {-0.2, -1.0}) {
      for (double t : {0.5, 5.0, 27.0, 60.0}) {
        CAPTURE(wmin);
        CAPTURE(t);
        const cplx want = oracle::truncated_amplitude(t, wmin, p.alpha, p.denominator_shift());
        CHECK(std::abs(amplitude_truncated(t, wmin, p) - want) < 2e-9);
      }
    }
  }

  TEST_CASE("truncated t = 0 mass") {
    const ModelParams p = figure_params();
    const double g = p.effective_width();
    const double want = p.alpha / (2.0 * std::numbers::pi * g) * (std::numbers::pi / 2.0 + std::atan(1.0 / g));
    CHECK(amplitude_truncated(0.0, -1.0, p).real() == doctest::Approx(want).epsilon(1e-10));
    const AmplitudeEvaluator ev(LowerTruncated{-1.0}, p);
    CHECK(ev.at_zero() == doctest::Approx(want).epsilon(1e-10));
    CHECK(std::abs(ev.normalized(0.0) - 1.0) < 1e-15);
  }

  TEST_CASE("interference split") {
    const ModelParams p = figure_params();
    for (double t : {3.0, 40.0}) {
      const InterferenceSplit s = decomposition_components(t, -0.4, p);
      CHECK(std::abs(s.exponential_term - amplitude_full(t, p)) < 1e-15);
      CHECK(std::abs(s.exponential_term - s.tail_term - amplitude_truncated(t, -0.4, p)) < 1e-15);
    }
  }

  TEST_CASE("doubly truncated against brute force") {
    const ModelParams p = plain();
    for (double t : {0.0, 2.0, 30.0, 95.0}) {
      const cplx want = oracle::fourier_simpson(-1.0, 3.0, t, p.alpha, p.denominator_shift(), 2e-5);
      CHECK(std::abs(amplitude_doubly_truncated(t, -1.0, 3.0, p) - want) < 1e-10);
    }
  }

  TEST_CASE("closed form agrees with quadrature") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ut(0.0, 100.0);
    for (int i = 0; i < 20; ++i) {
      const double t = ut(rng);
      const double w = i % 2 ? 1.0 : 3.0;
      for (const ModelParams& p : {plain(), figure_params()}) {
        const cplx closed = amplitude_doubly_truncated_closed(t, w, p);
        const cplx quad = amplitude_doubly_truncated(t, -w, w, p, 1e-12);
        CHECK(std::abs(closed - quad) < 1e-9);
      }
    }
    CHECK(amplitude_doubly_truncated_closed(0.0, 3.0, plain()).real() ==
          doctest::Approx(amplitude_doubly_truncated(0.0, -3.0, 3.0, plain()).real()));
    CHECK_THROWS_AS(amplitude_doubly_truncated_closed(1.0, -1.0, 3.0, plain()), InvalidArgument);
    CHECK_NOTHROW(amplitude_doubly_truncated_closed(1.0, -3.0, 3.0, plain()));
  }

  TEST_CASE("series grid, normalization and bounds") {
    const ModelParams p = figure_params();
    const SurvivalSeries s = survival_series(LowerTruncated{-0.2}, 0.0, 1.0, 80, p, true);
    REQUIRE(s.size() == 80);
    CHECK(s.times[79] == 79.0);
    CHECK(s.normalized);
    CHECK(std::abs(s.amplitudes[0] - 1.0) < 1e-15);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s.probabilities[i] >= 0.0);
      CHECK(s.probabilities[i] <= 1.0 + 1e-12);
      CHECK(s.amplitudes[i] == s.raw_amplitudes[i] / s.raw_at_zero);
    }
    const SurvivalSeries raw = survival_series(LowerTruncated{-0.2}, 0.0, 1.0, 5, p, false);
    CHECK(raw.amplitudes[3] == raw.raw_amplitudes[3]);
    CHECK(raw.raw_amplitudes[3] == s.raw_amplitudes[3]);
  }

  TEST_CASE("series is deterministic") {
    const ModelParams p = plain();
    const SurvivalSeries a = survival_series(DoublyTruncated{-1.0, 3.0}, 5.0, 0.7, 40, p, true);
    const SurvivalSeries b = survival_series(DoublyTruncated{-1.0, 3.0}, 5.0, 0.7, 40, p, true);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.raw_amplitudes[i] == b.raw_amplitudes[i]);
  }

  TEST_CASE("series argument checks") {
    const ModelParams p = plain();
    CHECK_THROWS_AS(survival_series(FullLine{}, 0.0, 0.0, 10, p, true), InvalidArgument);
    CHECK_THROWS_AS(survival_series(FullLine{}, 0.0, -1.0, 10, p, true), InvalidArgument);
    CHECK_THROWS_AS(survival_series(FullLine{}, 0.0, 1.0, 0, p, true), InvalidArgument);
    CHECK_THROWS_AS(survival_series(DoublyTruncated{3.0, -3.0}, 0.0, 1.0, 3, p, true),
                    InvalidArgument);
  }

  TEST_CASE("discrete spec through the evaluator") {
    const ModelParams p = params_from_coupling(0.0564, 0.1);
    const AmplitudeEvaluator ev(DiscreteLadder{12}, p);
    const EigenSolution eig = solve_eigensystem(DiscreteSpectrum{12, 0.0, 0.1, 0.0564});
    for (double t : {0.0, 3.0, 17.5})
      CHECK(std::abs(ev.raw(t) - survival_amplitude_discrete(t, eig)) < 1e-15);
    CHECK(ev.at_zero() == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("semigroup defect") {
    CHECK(semigroup_defect(3.0, 7.0, FullLine{}, plain()) < 1e-12);
    CHECK(semigroup_defect(5.0, 5.0, LowerTruncated{-0.2}, figure_params()) > 1e-6);
    CHECK_THROWS_AS(semigroup_defect(-1.0, 1.0, FullLine{}, plain()), InvalidArgument);
  }
}
