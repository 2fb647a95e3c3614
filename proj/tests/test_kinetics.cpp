#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "crn/errors.hpp"
#include "crn/kinetics.hpp"
#include "test_support.hpp"

using crn::RateTransform;

namespace {

std::vector<RateTransform> fixture_transforms() {
  return {RateTransform::identity(),
          RateTransform::make(1, 1, 1, 1),  // s/(1+s)
          RateTransform::make(1, 2, 1, 1),  // s^2/(1+s)
          RateTransform::make(1, 3, 1, 1),  // s^3/(1+s)
          RateTransform::make(2, 1.5, 0.5, 1)};
}

} // namespace

TEST_CASE("gamma evaluation anchors") {
  const auto sat = RateTransform::make(1, 1, 1, 1);
  CHECK(sat.eval(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(RateTransform::identity().eval(2.0) == 2.0);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(RateTransform::make(1, 2, 1, 1).eval(phi) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sat.eval(0.0) == 0.0);
  CHECK_THROWS_AS(sat.eval(-0.1), crn::DomainError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(RateTransform::make(0, 1, 0, 0), crn::ModelError);
  CHECK_THROWS_AS(RateTransform::make(-1, 1, 0, 0), crn::ModelError);
  CHECK_THROWS_AS(RateTransform::make(1, 0, 0, 0), crn::ModelError);
  CHECK_THROWS_AS(RateTransform::make(1, 1, 1, 2), crn::ModelError);  // p < q
  CHECK_THROWS_AS(RateTransform::make(1, 1, 0, 1), crn::ModelError);  // q>0 needs c>0
  CHECK_THROWS_AS(RateTransform::make(1, 1, -1, 0), crn::ModelError);
  CHECK_NOTHROW(RateTransform::make(2, 3, 0.5, 1).validate());
}

TEST_CASE("saturation bound") {
  CHECK(RateTransform::identity().sigma() == std::numeric_limits<double>::infinity());
  CHECK(RateTransform::make(1, 2, 1, 1).sigma() == std::numeric_limits<double>::infinity());
  CHECK(RateTransform::make(1, 1, 1, 1).sigma() == 1.0);
  CHECK(RateTransform::make(3, 2, 0.7, 2).sigma() == 3.0);
}

TEST_CASE("inverse anchors and saturation boundary") {
  const auto sat = RateTransform::make(1, 1, 1, 1);
  CHECK(sat.inverse(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(RateTransform::identity().inverse(3.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(sat.inverse(0.0) == 0.0);
  CHECK_THROWS_WITH_AS(sat.inverse(1.0), "saturation exceeded", crn::NumericError);
  CHECK_THROWS_AS(sat.inverse(2.0), crn::NumericError);
  CHECK_THROWS_AS(sat.inverse(-0.5), crn::DomainError);
}

TEST_CASE("inverse round trip over (0, 1e3)") {
  for (const auto& tr : fixture_transforms()) {
    for (int i = 0; i <= 60; ++i) {
      const double s = std::pow(10.0, -3.0 + 6.0 * i / 60.0); // 1e-3 .. 1e3
      const double u = tr.eval(s);
      if (!(u < tr.sigma())) continue;
      const double back = tr.inverse(u);
      CHECK(std::abs(back - s) <= 1e-10 * std::max(1.0, s));
      CHECK(std::abs(tr.eval(back) - u) <= 1e-12 * (1.0 + u));
    }
  }
}

TEST_CASE("strict monotonicity on a sampled grid") {
  for (const auto& tr : fixture_transforms()) {
    double prev = tr.eval(1e-4);
    for (int i = 1; i <= 400; ++i) {
      const double s = 1e-4 + i * 0.05;
      const double v = tr.eval(s);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("log form agrees with log of the evaluation") {
  for (const auto& tr : fixture_transforms()) {
    for (double s : {1e-6, 0.01, 0.5, 1.0, 3.7, 42.0, 900.0}) {
      const double direct = std::log(tr.eval(s));
      CHECK(std::abs(tr.log_eval(s) - direct) <= 1e-13 * (1.0 + std::abs(direct)));
    }
  }
  CHECK_THROWS_AS(RateTransform::identity().log_eval(0.0), crn::DomainError);
}

TEST_CASE("derivative: anchors and finite differences") {
  CHECK(RateTransform::identity().derivative(0.37) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(RateTransform::make(1, 1, 1, 1).derivative(1.0) ==
        doctest::Approx(0.25).epsilon(1e-13));
  for (const auto& tr : fixture_transforms()) {
    for (double s : {0.1, 1.0, 10.0}) {
      const double h = 1e-6 * std::max(1.0, s);
      const double fd = testsup::central_diff([&](double t) { return tr.eval(t); }, s, h);
      CHECK(tr.derivative(s) == doctest::Approx(fd).epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS(RateTransform::identity().derivative(0.0), crn::DomainError);
}

TEST_CASE("log antiderivative: identity anchor") {
  // int log s ds = s log s - s
  CHECK(RateTransform::identity().log_antideriv(1.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK_THROWS_AS(RateTransform::identity().log_antideriv(0.0), crn::DomainError);
}

TEST_CASE("log antiderivative differentiates back to log gamma") {
  for (const auto& tr : fixture_transforms()) {
    for (double s : {0.7, 0.1, 2.5, 20.0}) {
      const double fd =
          testsup::central_diff([&](double t) { return tr.log_antideriv(t); }, s, 1e-5);
      CHECK(std::abs(fd - tr.log_eval(s)) <= 1e-8 * (1.0 + std::abs(tr.log_eval(s))));
    }
  }
}

TEST_CASE("log antiderivative: closed form vs adaptive quadrature") {
  const auto quad = RateTransform::make(1, 2, 1, 1); // s^2/(1+s)
  // hand value at s = 1: 2(1*0 - 1) - (2 log 2 - 1 - 0) = -1 - 2 log 2
  CHECK(quad.log_antideriv(1.0) ==
        doctest::Approx(-1.0 - 2.0 * std::log(2.0)).epsilon(1e-14));
  for (const auto& tr : fixture_transforms()) {
    // int_a^b log gamma = F(b) - F(a), away from the s = 0 singularity
    using Interval = std::pair<double, double>;
    for (auto [a, b] : {Interval{0.5, 1.0}, Interval{1e-6, 2.0}, Interval{1.0, 30.0}}) {
      const double oracle =
          testsup::adaptive_simpson([&](double s) { return tr.log_eval(s); }, a, b, 1e-13);
      const double diff = tr.log_antideriv(b) - tr.log_antideriv(a);
      CHECK(std::abs(diff - oracle) <= 1e-10 * (1.0 + std::abs(oracle)));
    }
  }
}

TEST_CASE("log antiderivative vanishes at 0+") {
  for (const auto& tr : fixture_transforms())
    CHECK(std::abs(tr.log_antideriv(1e-14)) < 1e-11);
}
