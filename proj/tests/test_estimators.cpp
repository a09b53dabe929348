#include <doctest.h>

#include <cmath>
#include <vector>

#include "rvf/error.hpp"
#include "rvf/estimators.hpp"

using namespace rvf;

namespace {
const GemanMcClureParams kUnit{1.0};
}

TEST_CASE("gm_loss values") {
  CHECK(gm_loss(0.0, kUnit) == 0.0);
  CHECK(gm_loss(1.0, kUnit) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(gm_loss(1e6, kUnit) - 1.0) < 1e-11);
  CHECK(gm_loss(1e6, kUnit) < 1.0);
}

TEST_CASE("gm_score values") {
  CHECK(gm_score(0.0, kUnit) == 0.0);
  // Maximum at 1/sqrt(3), value 9/(8 sqrt 3); confirmed by a grid search in
  // tests/oracles/frozen_values.py.
  const double peak = gm_score(1.0 / std::sqrt(3.0), kUnit);
  CHECK(peak == doctest::Approx(0.649519052838329).epsilon(1e-13));
  for (double e : {0.5, 0.55, 0.6, 0.65, 1.0}) CHECK(gm_score(e, kUnit) <= peak);
  CHECK(gm_score(10.0, kUnit) == doctest::Approx(0.00196059209881384).epsilon(1e-13));
  CHECK(gm_score(-2.0, kUnit) == -gm_score(2.0, kUnit));
}

TEST_CASE("gm_weight values") {
  CHECK(gm_weight(0.0, kUnit) == 1.0);
  CHECK(gm_weight(1.0, kUnit) == 0.25);
  CHECK(gm_weight(10.0, {0.3}) == doctest::Approx(8.98382184378549e-06).epsilon(1e-12));
}

TEST_CASE("gm_score matches centered finite differences of gm_loss") {
  for (double sigma : {0.1, 0.3, 1.0, 1.8}) {
    const GemanMcClureParams p{sigma};
    for (int i = -2000; i <= 2000; ++i) {
      const double e = 0.005 * i;
      if (e == 0.0) continue;
      const double h = 1e-4 * std::max(sigma, std::abs(e));
      const double fd = (gm_loss(e + h, p) - gm_loss(e - h, p)) / (2.0 * h);
      const double an = gm_score(e, p);
      CHECK(std::abs(fd - an) / std::abs(an) < 1e-6);
    }
  }
}

TEST_CASE("gm_weight is score/(2e), even, non-increasing and has the right limits") {
  for (double sigma : {0.1, 0.3, 1.0, 1.8}) {
    const GemanMcClureParams p{sigma};
    double previous = gm_weight(0.0, p);
    CHECK(previous == doctest::Approx(1.0 / (sigma * sigma)).epsilon(1e-14));
    for (int i = 1; i <= 1000; ++i) {
      const double e = 0.01 * i;
      const double w = gm_weight(e, p);
      CHECK(std::abs(w - gm_score(e, p) / (2.0 * e)) <= 1e-12 * w);
      CHECK(w == gm_weight(-e, p));
      CHECK(w <= previous);
      CHECK(w > 0.0);
      previous = w;
    }
    CHECK(gm_weight(1e8, p) < 1e-30);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(GemanMcClureParams{0.0}.validate(), InvalidArgument);
  CHECK_THROWS_AS(GemanMcClureParams{-1.0}.validate(), InvalidArgument);
  CHECK_NOTHROW(HampelParams{}.validate());
  CHECK_THROWS_AS((HampelParams{1.0, 0.5, 2.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((HampelParams{0.0, 0.5, 2.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS(LpParams{1.0}.validate(), InvalidArgument);
  CHECK_THROWS_AS(LpParams{2.1}.validate(), InvalidArgument);
  CHECK_NOTHROW(LpParams{2.0}.validate());
}

TEST_CASE("hampel_weight zones") {
  const HampelParams p;  // 0.6, 1.3, 1.8
  const double scale = 2.0;
  CHECK(hampel_weight(0.0, scale, p) == 1.0);
  CHECK(hampel_weight(2.0 * p.t3 * scale, scale, p) == 0.0);
  CHECK(hampel_weight(p.t1 * scale, scale, p) == 1.0);
  CHECK(hampel_weight(p.t3 * scale * (1.0 - 1e-12), scale, p) < 1e-10);
  // Continuity at t2 * scale: clipping and redescending formulas agree.
  const double b = p.t2 * scale;
  CHECK(hampel_weight(b, scale, p) == doctest::Approx(p.t1 / p.t2));
  CHECK(hampel_weight(b * (1 + 1e-12), scale, p) == doctest::Approx(p.t1 / p.t2));
  double previous = 1.0;
  for (int i = 0; i <= 500; ++i) {
    const double e = 0.01 * i;
    const double w = hampel_weight(e, scale, p);
    CHECK(w >= 0.0);
    CHECK(w <= 1.0);
    CHECK(w <= previous);
    CHECK(w == hampel_weight(-e, scale, p));
    previous = w;
  }
  CHECK_THROWS_AS(hampel_weight(1.0, 0.0, p), InvalidArgument);
}

TEST_CASE("lp_weight") {
  CHECK(lp_weight(0.37, {2.0}, 1e-3) == 1.0);
  CHECK(lp_weight(-55.0, {2.0}, 1e-3) == 1.0);
  CHECK(lp_weight(10.0, {1.2}, 1e-3) == doctest::Approx(0.158489319246111).epsilon(1e-13));
  CHECK(lp_weight(0.0, {1.2}, 1e-3) == doctest::Approx(251.188643150958).epsilon(1e-12));
  CHECK(lp_weight(-10.0, {1.2}, 1e-3) == lp_weight(10.0, {1.2}, 1e-3));
  CHECK(std::isfinite(lp_weight(0.0, {1.01}, 1e-3)));
  CHECK_THROWS_AS(lp_weight(1.0, {1.2}, 0.0), InvalidArgument);
}

TEST_CASE("robust scale window") {
  RobustScaleWindow w(4);
  CHECK(w.scale() == 0.0);
  w.push(1.0);
  w.push(-3.0);
  w.push(2.0);
  CHECK_FALSE(w.full());
  CHECK(w.scale() == doctest::Approx(1.483 * 2.0));
  w.push(10.0);
  CHECK(w.full());
  CHECK(w.scale() == doctest::Approx(1.483 * 2.5));
  w.push(0.5);  // evicts 1.0 -> {3, 2, 10, 0.5}
  CHECK(w.size() == 4);
  CHECK(w.scale() == doctest::Approx(1.483 * 2.5));
  CHECK_THROWS_AS(RobustScaleWindow(0), InvalidArgument);
}
