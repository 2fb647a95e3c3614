#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "crn/cli.hpp"
#include "crn/history.hpp"
#include "crn/network.hpp"
#include "crn/sim.hpp"

namespace testsup {

// ----------------------------------------------------------- fixture nets

inline crn::Network example1_ma(double back_delay = 0.5) {
  crn::NetworkSpec spec;
  spec.species = {{"X1", crn::RateTransform::identity()},
                  {"X2", crn::RateTransform::identity()}};
  spec.reactions = {{{{"X1", 2}}, {{"X2", 1}}, 1.0, 0.0},
                    {{{"X2", 1}}, {{"X1", 2}}, 2.0, back_delay}};
  return crn::build_network(spec);
}

inline crn::Network example1_tr(double back_delay = 0.5) {
  crn::NetworkSpec spec;
  spec.species = {{"X1", crn::RateTransform::make(1, 2, 1, 1)},
                  {"X2", crn::RateTransform::make(1, 3, 1, 1)}};
  spec.reactions = {{{{"X1", 2}}, {{"X2", 1}}, 1.0, 0.0},
                    {{{"X2", 1}}, {{"X1", 2}}, 2.0, back_delay}};
  return crn::build_network(spec);
}

inline crn::Network example2_net() {
  const double cbrt2 = std::cbrt(2.0);
  crn::NetworkSpec spec;
  spec.species = {{"X1", crn::RateTransform::identity()},
                  {"X2", crn::RateTransform::make(1, 3, 1, 1)}};
  spec.reactions = {
      {{{"X1", 3}}, {{"X2", 3}}, 1.4 / 3.0, 0.0},
      {{{"X2", 3}}, {{"X1", 3}}, 2.8 / 3.0, 0.0},
      {{{"X1", 3}}, {{"X1", 2}, {"X2", 1}}, 0.1, 0.0},
      {{{"X1", 2}, {"X2", 1}}, {{"X1", 3}}, 0.1 * cbrt2, 0.4},
      {{{"X2", 3}}, {{"X1", 2}, {"X2", 1}}, 0.1, 0.0},
      {{{"X1", 2}, {"X2", 1}}, {{"X2", 3}}, 0.05 * cbrt2, 0.6},
  };
  return crn::build_network(spec);
}

inline crn::Network example3_net() {
  crn::NetworkSpec spec;
  spec.species = {{"X1", crn::RateTransform::identity()},
                  {"X2", crn::RateTransform::make(1, 2, 1, 1)},
                  {"X3", crn::RateTransform::make(1, 1, 1, 1)}};
  spec.reactions = {
      {{{"X1", 2}}, {{"X3", 2}}, 1.0, 1.0},
      {{{"X3", 2}}, {{"X1", 2}}, 1.0, 0.0},
      {{{"X1", 2}, {"X2", 1}}, {{"X3", 3}}, 1.0, 0.0},
      {{{"X3", 3}}, {{"X1", 2}, {"X2", 1}}, 2.0, 0.5},
  };
  return crn::build_network(spec);
}

// balanced references
inline crn::Vec example1_ma_ref() { return {2.0, 2.0}; }
inline crn::Vec example1_tr_ref() { return {(1.0 + std::sqrt(5.0)) / 2.0, 1.0}; }
inline crn::Vec example2_ref() {
  const double plastic =
      std::cbrt(0.5 + std::sqrt(23.0 / 108.0)) + std::cbrt(0.5 - std::sqrt(23.0 / 108.0));
  return {std::cbrt(2.0), plastic};
}
inline crn::Vec example3_ref() { return {0.5, (1.0 + std::sqrt(5.0)) / 2.0, 1.0}; }

inline crn::History const_hist(const crn::Network& net, crn::Vec v) {
  const double lo = net.tau_max() > 0.0 ? -net.tau_max() : -1.0;
  return crn::History::constant(std::move(v), lo, 0.0);
}

// ------------------------------------------------------------- oracles

template <typename F>
double central_diff(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

namespace detail {
template <typename F>
double adaptive_simpson_rec(F&& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
} // namespace detail

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

/// Plain fixed-step RK4 for nondelayed systems; independent of the
/// method-of-steps integrator.
template <typename F>
std::vector<crn::Vec> rk4_ode(F&& f, crn::Vec x, double dt, long steps) {
  std::vector<crn::Vec> out{x};
  for (long j = 0; j < steps; ++j) {
    const crn::Vec k1 = f(x);
    crn::Vec xs = x;
    crn::axpy(xs, 0.5 * dt, k1);
    const crn::Vec k2 = f(xs);
    xs = x;
    crn::axpy(xs, 0.5 * dt, k2);
    const crn::Vec k3 = f(xs);
    xs = x;
    crn::axpy(xs, dt, k3);
    const crn::Vec k4 = f(xs);
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    out.push_back(x);
  }
  return out;
}

/// Constant history with the same delayed class as base: shifts `point`
/// along the (positive) complement direction until c_v matches. Requires a
/// one-dimensional complement.
inline crn::Vec rebalance_to_class(const crn::Network& net, const crn::Vec& base,
                                   crn::Vec point) {
  const crn::StoichBasis basis = crn::stoich_bases(net);
  if (basis.s_perp_basis.size() != 1)
    throw std::logic_error("rebalance_to_class expects dim S-perp == 1");
  const crn::Vec vhat = basis.s_perp_basis.front();
  const double target = crn::conserved_value(net, vhat, const_hist(net, base));
  auto value = [&](double alpha) {
    crn::Vec x = point;
    crn::axpy(x, alpha, vhat);
    return crn::conserved_value(net, vhat, const_hist(net, x)) - target;
  };
  auto positive = [&](double alpha) {
    crn::Vec x = point;
    crn::axpy(x, alpha, vhat);
    for (double v : x)
      if (!(v > 1e-6)) return false;
    return true;
  };
  // c_v is strictly increasing along the positive direction vhat
  const double v0 = value(0.0);
  if (v0 == 0.0) return point;
  const double dir = v0 > 0.0 ? -1.0 : 1.0;
  double a1 = dir * 0.1;
  while (positive(a1) && value(a1) * v0 > 0.0 && std::abs(a1) < 64.0) a1 *= 2.0;
  if (!positive(a1) || value(a1) * v0 > 0.0)
    throw std::logic_error("rebalance_to_class: failed to bracket");
  double lo = std::min(0.0, a1), hi = std::max(0.0, a1);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (value(mid) < 0.0 ? lo : hi) = mid;
  }
  crn::axpy(point, 0.5 * (lo + hi), vhat);
  return point;
}

// ----------------------------------------------------------------- misc

inline std::pair<int, std::string> run_cli(const std::vector<std::string>& args) {
  std::stringstream buf;
  std::streambuf* old = std::cout.rdbuf(buf.rdbuf());
  int code = 0;
  try {
    code = crn::run_command(args);
  } catch (...) {
    std::cout.rdbuf(old);
    throw;
  }
  std::cout.rdbuf(old);
  return {code, buf.str()};
}

inline std::string models_dir() { return CRN_MODELS_DIR; }

inline std::string tmp_dir() {
  const std::string dir = CRN_TEST_TMP_DIR;
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline crn::Vec log_uniform_state(std::mt19937_64& gen, const crn::Vec& center,
                                  double lo_factor, double hi_factor) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  crn::Vec x(center.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lo = std::log(lo_factor * center[i]);
    const double hi = std::log(hi_factor * center[i]);
    x[i] = std::exp(lo + unif(gen) * (hi - lo));
  }
  return x;
}

} // namespace testsup
