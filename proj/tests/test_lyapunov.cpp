#include <doctest.h>

#include <cmath>

#include "crn/equilibria.hpp"
#include "crn/errors.hpp"
#include "crn/lyapunov.hpp"
#include "test_support.hpp"

using namespace crn;

TEST_CASE("v_point anchors") {
  const Network net = testsup::example1_ma();
  const Vec ref{2.0, 2.0};
  CHECK(v_point(net, ref, ref) == 0.0);
  // mass action closed form: sum x log(x/xbar) + xbar - x = 2(1 - log 2)
  CHECK(v_point(net, {1.0, 1.0}, ref) ==
        doctest::Approx(2.0 * (1.0 - std::log(2.0))).epsilon(1e-14));
  CHECK_THROWS_AS(v_point(net, {1.0, -1.0}, ref), DomainError);
}

TEST_CASE("v_point: closed form vs adaptive quadrature on example 3 transforms") {
  const Network net = testsup::example3_net();
  const Vec ref = testsup::example3_ref();
  for (const Vec& x : {Vec{0.3, 1.1, 0.7}, Vec{1.2, 2.0, 0.2}, Vec{0.55, 1.5, 1.4}}) {
    double oracle = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& tr = net.species[i].transform;
      oracle += testsup::adaptive_simpson(
          [&](double s) { return tr.log_eval(s) - tr.log_eval(ref[i]); }, ref[i], x[i],
          1e-13);
    }
    CHECK(std::abs(v_point(net, x, ref) - oracle) <= 1e-10 * (1.0 + std::abs(oracle)));
  }
}

TEST_CASE("v_point specializes to the classical form for identity transforms") {
  const Network net = testsup::example1_ma();
  auto gen = testsup::rng(1234);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec x = testsup::log_uniform_state(gen, {1.0, 1.0}, 0.2, 5.0);
    const Vec ref = testsup::log_uniform_state(gen, {1.0, 1.0}, 0.2, 5.0);
    double classical = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
      classical += x[i] * std::log(x[i] / ref[i]) + ref[i] - x[i];
    CHECK(std::abs(v_point(net, x, ref) - classical) <= 1e-12 * (1.0 + classical));
  }
}

TEST_CASE("v_point nonnegativity and identifiability") {
  auto gen = testsup::rng(99);
  for (const Network& net : {testsup::example1_tr(), testsup::example3_net()}) {
    const Vec ref = net.species_count() == 2 ? testsup::example1_tr_ref()
                                             : testsup::example3_ref();
    for (int trial = 0; trial < 1000; ++trial) {
      const Vec x = testsup::log_uniform_state(gen, ref, 0.1, 10.0);
      const double v = v_point(net, x, ref);
      CHECK(v >= 0.0);
      if (v < 1e-12) CHECK(norm_inf(sub(x, ref)) < 1e-6);
    }
  }
}

TEST_CASE("v_point gradient matches rho(x) - rho(reference)") {
  const Network net = testsup::example3_net();
  const Vec ref = testsup::example3_ref();
  auto gen = testsup::rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x = testsup::log_uniform_state(gen, ref, 0.3, 3.0);
    const Vec expected = sub(rho(net, x), rho(net, ref));
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double fd = testsup::central_diff(
          [&](double t) {
            Vec xt = x;
            xt[i] = t;
            return v_point(net, xt, ref);
          },
          x[i], 1e-6);
      CHECK(std::abs(fd - expected[i]) <= 1e-6 * (1.0 + std::abs(expected[i])));
    }
  }
}

TEST_CASE("v_krasovskii anchors") {
  const Network net = testsup::example1_ma();
  const Vec ref{2.0, 2.0};
  SUBCASE("zero at the reference history") {
    CHECK(v_krasovskii(net, testsup::const_hist(net, ref), ref) ==
          doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("hand value at the constant history (1,1)") {
    // v_point + k2 tau2 (1 (0 - log2 - 1) + 2) = 2(1-log2) + (1-log2) = 3(1-log2)
    CHECK(v_krasovskii(net, testsup::const_hist(net, {1.0, 1.0}), ref) ==
          doctest::Approx(3.0 * (1.0 - std::log(2.0))).epsilon(1e-13));
  }
  SUBCASE("zero delays collapse to v_point") {
    const Network nod = testsup::example1_ma(0.0);
    const Vec x{0.8, 1.7};
    CHECK(v_krasovskii(nod, testsup::const_hist(nod, x), ref) ==
          doctest::Approx(v_point(nod, x, ref)).epsilon(1e-14));
  }
  SUBCASE("dominates v_point at psi(0)") {
    auto gen = testsup::rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      const Vec x = testsup::log_uniform_state(gen, ref, 0.2, 5.0);
      const double vk = v_krasovskii(net, testsup::const_hist(net, x), ref);
      CHECK(vk >= v_point(net, x, ref) - 1e-14);
      CHECK(vk >= 0.0);
    }
  }
}

TEST_CASE("decrease report") {
  const Network net = testsup::example1_ma();
  SUBCASE("equilibrium trajectory evaluates to zero and passes") {
    const double x1 = (-1.0 + std::sqrt(41.0)) / 4.0;
    const Vec xeq{x1, x1 * x1 / 2.0};
    const Trajectory traj = simulate(net, testsup::const_hist(net, xeq), {5.0, 0.01});
    const DecreaseReport r = decrease_report(net, traj, xeq);
    CHECK(r.passed);
    CHECK(r.reference_balanced);
    for (double v : r.values) CHECK(std::abs(v) < 1e-10);
  }
  SUBCASE("run from (1,1) decreases monotonically to the class equilibrium") {
    const Trajectory traj =
        simulate(net, testsup::const_hist(net, {1.0, 1.0}), {30.0, 0.01});
    const Vec xeq =
        class_equilibrium(net, testsup::example1_ma_ref(), testsup::const_hist(net, {1.0, 1.0}));
    const DecreaseReport r = decrease_report(net, traj, xeq);
    CHECK(r.passed);
    CHECK(r.values.front() > 1e-2);
    CHECK(r.values.back() < 1e-10);
    for (std::size_t j = 0; j + 1 < r.values.size(); ++j)
      CHECK(r.values[j + 1] <= r.values[j] + 1e-8 * (1.0 + r.values[j]));
  }
  SUBCASE("example 3 from a positive constant history passes") {
    const Network ex3 = testsup::example3_net();
    const History theta = testsup::const_hist(ex3, {0.6, 1.2, 0.8});
    const Trajectory traj = simulate(ex3, theta, {20.0, 0.01});
    const Vec xeq = class_equilibrium(ex3, testsup::example3_ref(), theta);
    const DecreaseReport r = decrease_report(ex3, traj, xeq);
    CHECK(r.passed);
    CHECK(r.reference_balanced);
  }
  SUBCASE("an unbalanced reference flags the report invalid") {
    const Trajectory traj = simulate(net, testsup::const_hist(net, {1.0, 1.0}), {1.0, 0.01});
    const DecreaseReport r = decrease_report(net, traj, {1.0, 1.0});
    CHECK_FALSE(r.reference_balanced);
  }
}

TEST_CASE("q_values") {
  const Network net = testsup::example1_ma();
  const Vec ref{2.0, 2.0};
  SUBCASE("zero at the reference") {
    for (double q : q_values(net, ref, ref)) CHECK(q == 0.0);
  }
  SUBCASE("hand values at (1,1)") {
    const Vec q = q_values(net, {1.0, 1.0}, ref);
    CHECK(q[0] == doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-14)); // complex 2X1
    CHECK(q[1] == doctest::Approx(-std::log(2.0)).epsilon(1e-14));       // complex X2
  }
  SUBCASE("equal across reactions on the equilibrium set") {
    const StoichBasis basis = stoich_bases(net);
    const Vec vhat = basis.s_perp_basis[0];
    for (double t : {-0.4, 0.25, 0.9}) {
      const Vec x{ref[0] * std::exp(t * vhat[0]), ref[1] * std::exp(t * vhat[1])};
      const Vec q = q_values(net, x, ref);
      for (std::size_t k = 0; k < net.reaction_count(); ++k) {
        const auto& r = net.reactions[k];
        CHECK(std::abs(q[r.source] - q[r.product]) < 1e-12);
      }
    }
  }
  SUBCASE("the exponentiated q row annihilates K~ Gamma(reference)") {
    const Mat lap = laplacian(net);
    const Vec kg = lap.mul(gamma_vector(net, ref));
    const Vec q = q_values(net, {1.4, 0.9}, ref);
    double inner = 0.0;
    for (std::size_t l = 0; l < q.size(); ++l) inner += std::exp(q[l]) * kg[l];
    CHECK(std::abs(inner) <= 1e-12);
  }
}
