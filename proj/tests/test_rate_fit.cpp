#include <doctest.h>

#include <gtube/errors.hpp>
#include <gtube/rate_fit.hpp>

#include <cmath>

using namespace gtube;

namespace {

RVec grid(double lo, double hi, int n) {
  RVec v;
  for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, i / (n - 1.0)));
  return v;
}

}  // namespace

TEST_CASE("exact power law") {
  const RVec l = grid(50, 800, 7);
  RVec e;
  for (double x : l) e.push_back(std::pow(x, -0.5));
  const auto f = fit_rate(l, e);
  CHECK(std::abs(f.slope + 0.5) < 1e-12);
  CHECK(std::abs(f.intercept) < 1e-10);
  CHECK(f.ci_high - f.ci_low < 1e-10);
  CHECK(f.used == 7);
  CHECK_FALSE(f.non_convergent);
  CHECK_FALSE(f.floor_limited);
}

TEST_CASE("two-term synthetic data") {
  const RVec l = grid(50, 800, 7);
  RVec e;
  for (double x : l) e.push_back(std::pow(x, -0.5) + 1.0 / x);
  const auto f = fit_rate(l, e);
  CHECK(f.slope > -0.6);
  CHECK(f.slope < -0.45);
  CHECK(f.ci_low <= f.slope);
  CHECK(f.ci_high >= f.slope);
}

TEST_CASE("constant data is non-convergent") {
  const RVec l = grid(50, 400, 6);
  const auto f = fit_rate(l, RVec(6, 0.3));
  CHECK(std::abs(f.slope) < 1e-12);
  CHECK(f.non_convergent);
}

TEST_CASE("floor-limited data") {
  const RVec l = grid(50, 400, 6);
  const auto f = fit_rate(l, {1e-3, 1e-16, 0.0, 0.0, -1.0, 0.0});
  CHECK(f.floor_limited);
  CHECK(f.used == 1);
  CHECK(std::isnan(f.slope));
  // points at the floor are dropped, the rest still fit
  const auto g = fit_rate(l, {1e-3, 1e-4, 1e-5, 1e-16, 0.0, 0.0});
  CHECK_FALSE(g.floor_limited);
  CHECK(g.used == 3);
}

TEST_CASE("fit preconditions") {
  CHECK_THROWS_AS(fit_rate({1, 2, 3, 4}, {1, 1, 1, 1}), FitError);
  CHECK_THROWS_AS(fit_rate({1, 1.2, 1.5, 2, 3}, {1, 1, 1, 1, 1}), FitError);
  CHECK_THROWS_AS(loglog_fit({1, 2}, {1}), FitError);
  CHECK_THROWS_AS(loglog_fit({0, 2}, {1, 1}), FitError);
}
