#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qdecay/errors.hpp"
#include "qdecay/model.hpp"

using namespace qdecay;

TEST_SUITE("model") {
  TEST_CASE("widths") {
    ModelParams p;
    p.alpha = 0.2;
    CHECK(p.half_width() == doctest::Approx(0.1));
    CHECK(p.effective_width() == doctest::Approx(0.1));
    p.vbar = 0.0564;
    CHECK(p.effective_width() == doctest::Approx(0.1));
    p.include_vbar_sq = true;
    CHECK(p.effective_width() == doctest::Approx(std::sqrt(0.01 + 0.0564 * 0.0564)));
  }

  TEST_CASE("density mass is alpha / (2 gamma)") {
    for (bool flag : {false, true}) {
      ModelParams p;
      p.alpha = 0.2;
      p.vbar = 0.0564;
      p.include_vbar_sq = flag;
      const double W = 1e4;
      const double body = oracle::adaptive_simpson(
          [&](double w) { return lorentzian_density(w, p); }, -W, W, 1e-13);
      // Tails beyond W to leading order in 1/W.
      const double tails = 2.0 * p.alpha / (2.0 * std::numbers::pi) / W;
      CHECK(body + tails == doctest::Approx(p.alpha / (2.0 * p.effective_width())).epsilon(1e-9));
    }
  }

  TEST_CASE("validation") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    p.alpha = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p.alpha = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p.alpha = 0.2;
    p.include_vbar_sq = true;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p.vbar = 0.0564;
    CHECK_NOTHROW(p.validate());
    p.epsilon = 0.1;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);  // 2 pi vbar^2 / eps = 0.19987
    p.vbar = std::sqrt(0.2 * 0.1 / (2.0 * std::numbers::pi));
    CHECK_NOTHROW(p.validate());
    p.epsilon = -0.1;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
  }

  TEST_CASE("coupling relation") {
    const ModelParams p = params_from_coupling(0.0564, 0.1);
    CHECK(p.alpha == doctest::Approx(2.0 * std::numbers::pi * 0.0564 * 0.0564 / 0.1));
    CHECK(p.alpha == doctest::Approx(0.2).epsilon(1e-3));
    CHECK_NOTHROW(p.validate());
    CHECK_THROWS_AS(params_from_coupling(0.05, 0.0), InvalidArgument);
    CHECK_THROWS_AS(params_from_coupling(-0.05, 0.1), InvalidArgument);
  }

  TEST_CASE("spec validation and names") {
    CHECK_NOTHROW(validate(ContinuumSpec{FullLine{}}));
    CHECK_NOTHROW(validate(ContinuumSpec{LowerTruncated{-1.0}}));
    CHECK_THROWS_AS(validate(ContinuumSpec{LowerTruncated{-INFINITY}}), InvalidArgument);
    CHECK_THROWS_AS(validate(ContinuumSpec{DoublyTruncated{3.0, -3.0}}), InvalidArgument);
    CHECK_THROWS_AS(validate(ContinuumSpec{DoublyTruncated{1.0, 1.0}}), InvalidArgument);
    CHECK_THROWS_AS(validate(ContinuumSpec{DiscreteLadder{-1}}), InvalidArgument);
    CHECK(kind_name(FullLine{}) == "full");
    CHECK(kind_name(LowerTruncated{-1}) == "lower_truncated");
    CHECK(kind_name(DoublyTruncated{-1, 1}) == "doubly_truncated");
    CHECK(kind_name(DiscreteLadder{3}) == "discrete");
    CHECK(DoublyTruncated{-3, 3}.symmetric());
    CHECK_FALSE(DoublyTruncated{-1, 3}.symmetric());
  }
}
