#pragma once

#include <vector>

#include "crn/network.hpp"
#include "crn/sim.hpp"

namespace crn {

/// Discrete decrease certificate for the Krasovskii functional along a
/// trajectory: V(t_{j+1}) <= V(t_j) + tol (1 + V(t_j)) at sampled points.
struct DecreaseReport {
  std::vector<double> times;
  std::vector<double> values;
  double max_increase = 0.0;        // max of V(t_{j+1}) - V(t_j)
  double max_scaled_increase = 0.0; // max of (V(t_{j+1}) - V(t_j)) / (1 + V(t_j))
  double tolerance = 1e-8;
  bool passed = false;            // max_scaled_increase <= tolerance
  bool reference_balanced = true; // decrease is only guaranteed for balanced references
};

/// Nondelayed Lyapunov value
///   V(x, x~) = sum_i int_{x~_i}^{x_i} (log gamma_i(s) - log gamma_i(x~_i)) ds,
/// evaluated through the closed-form antiderivative. Nonnegative, zero only
/// at the reference.
double v_point(const Network& net, const Vec& x, const Vec& reference);

/// Krasovskii functional: v_point at psi(0) plus, per delayed reaction,
///   kappa_k int_{-tau_k}^0 (a (log a - log b - 1) + b) ds
/// with a = gamma^{y_k}(psi(s)) and b = gamma^{y_k}(x~).
double v_krasovskii(const Network& net, const History& psi, const Vec& reference);
double v_krasovskii(const Network& net, const Trajectory& traj, double t,
                    const Vec& reference);

/// Evaluates the functional along a trajectory and checks discrete decrease.
/// stride <= 0 selects the default sampling (every mesh point up to t = 10,
/// every 10th beyond); the final mesh point is always included.
DecreaseReport decrease_report(const Network& net, const Trajectory& traj,
                               const Vec& reference, int stride = 0);

/// Per-complex diagnostics q_eta = (rho(x) - rho(x~)) . eta (length L).
Vec q_values(const Network& net, const Vec& x, const Vec& reference);

} // namespace crn
