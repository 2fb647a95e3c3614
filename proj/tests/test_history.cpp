#include <doctest.h>

#include <cmath>

#include "crn/errors.hpp"
#include "crn/history.hpp"
#include "test_support.hpp"

using namespace crn;

TEST_CASE("constant history evaluates everywhere left of its end") {
  const History h = History::constant({1.5, 2.5}, -1.0, 0.0);
  CHECK(h.eval(0.0) == Vec{1.5, 2.5});
  CHECK(h.eval(-0.7) == Vec{1.5, 2.5});
  CHECK(h.eval(-10.0) == Vec{1.5, 2.5}); // constant extension
  CHECK(h.strictly_positive());
}

TEST_CASE("two knots reproduce the straight line") {
  const History h = History::from_knots({-1.0, 0.0}, {{1.0}, {3.0}});
  for (double t : {-1.0, -0.75, -0.5, -0.25, 0.0})
    CHECK(h.eval(t)[0] == doctest::Approx(3.0 + 2.0 * t).epsilon(1e-14));
}

TEST_CASE("knot interpolation hits the knots and stays C1") {
  const std::vector<double> times{-2.0, -1.2, -0.5, 0.0};
  const std::vector<Vec> values{{1.0, 2.0}, {1.5, 1.0}, {0.8, 1.4}, {1.2, 1.1}};
  const History h = History::from_knots(times, values);
  for (std::size_t j = 0; j < times.size(); ++j) {
    const Vec v = h.eval(times[j]);
    CHECK(v[0] == doctest::Approx(values[j][0]).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(values[j][1]).epsilon(1e-14));
  }
  // one-sided slopes agree across interior knots
  for (std::size_t j = 1; j + 1 < times.size(); ++j) {
    const double eps = 1e-7;
    const double left = (h.eval(times[j])[0] - h.eval(times[j] - eps)[0]) / eps;
    const double right = (h.eval(times[j] + eps)[0] - h.eval(times[j])[0]) / eps;
    CHECK(std::abs(left - right) < 1e-5);
  }
  // natural ends: second derivative vanishes at both boundaries
  auto second = [&](double t, double eps) {
    return (h.eval(t + eps)[0] - 2.0 * h.eval(t)[0] + h.eval(t - eps)[0]) / (eps * eps);
  };
  CHECK(std::abs(second(times.front() + 1e-4, 1e-4)) < 1e-2);
  CHECK(std::abs(second(times.back() - 1e-4, 1e-4)) < 1e-2);
}

TEST_CASE("history validation") {
  CHECK_THROWS_AS(History::from_knots({0.0, 0.0}, {{1.0}, {2.0}}), ModelError);
  CHECK_THROWS_AS(History::from_knots({0.0}, {{1.0}}), ModelError);
  CHECK_THROWS_AS(History::constant({1.0}, 0.0, 0.0), ModelError);
  History h = History::constant({1.0}, -1.0, 0.0);
  CHECK_THROWS_AS(h.eval(0.5), DomainError);
  History clamped = History::from_knots({-1.0, 0.0}, {{1.0}, {2.0}});
  clamped.set_extends_left(false);
  CHECK_THROWS_AS(clamped.eval(-2.0), DomainError);
}

TEST_CASE("hermite evaluation is exact at segment ends") {
  const Vec x0{1.0, 2.0}, d0{0.3, -0.1}, x1{0.5, 2.5}, d1{-0.2, 0.4};
  CHECK(hermite_eval(1.0, 1.0, 2.0, x0, d0, x1, d1) == x0);
  CHECK(hermite_eval(2.0, 1.0, 2.0, x0, d0, x1, d1) == x1);
}
