#pragma once

#include <functional>
#include <vector>

#include "crn/history.hpp"
#include "crn/network.hpp"

namespace crn {

struct SimConfig {
  double t_end = 0.0;
  double dt = 0.0;
  double positivity_floor = 1e-12;
};

/// Output of the method-of-steps integrator: uniform mesh from t = 0, states
/// and right-hand-side values at mesh points (cubic Hermite dense output),
/// plus the initial history for t <= 0.
class Trajectory {
public:
  Trajectory(const Network& net, History initial);

  const History& initial_history() const { return initial_; }
  const std::vector<double>& mesh() const { return mesh_; }
  const std::vector<Vec>& states() const { return states_; }
  const std::vector<Vec>& derivs() const { return derivs_; }

  double final_time() const { return mesh_.back(); }
  const Vec& final_state() const { return states_.back(); }
  double t_min() const; // left end of the evaluable domain

  /// Dense evaluation on [t_min, final_time]; t <= 0 delegates to the
  /// initial history.
  Vec eval(double t) const;

  void append(double t, Vec state, Vec deriv);

private:
  History initial_;
  std::vector<double> mesh_;
  std::vector<Vec> states_;
  std::vector<Vec> derivs_;
};

/// Integrates the delayed system by classical RK4 with the method of steps.
/// theta must end at t = 0, cover [-tau_max, 0], and be strictly positive;
/// dt must not exceed the smallest positive delay so stage lookups never
/// read the step being built. Throws NumericError("positivity lost, reduce
/// dt") when a state drops below -positivity_floor.
Trajectory simulate(const Network& net, const History& theta, const SimConfig& cfg);

/// Right-hand side of the delayed system at time t with current state xc;
/// delayed source monomials are read from the trajectory's dense output
/// (the initial history for arguments <= 0).
Vec dde_rhs(const Network& net, const Trajectory& traj, double t, const Vec& xc,
            double positivity_floor);

/// integral_{-tau_k}^0 gamma^{y_k}(psi(s)) ds by composite 5-point
/// Gauss-Legendre; panel width tau_max/64, at least 4 panels. Interior
/// breakpoints (local time in (-tau_k, 0)) align panel boundaries with
/// known derivative kinks of psi, e.g. the start of a trajectory.
double delay_integral(const Network& net, std::size_t k, const std::function<Vec(double)>& psi,
                      const std::vector<double>& breakpoints = {});

/// Conserved functional c_v(psi) = v . [psi(0) + sum_k kappa_k
/// (integral gamma^{y_k}(psi)) y_k]; v must lie in S-perp (checked to 1e-10).
double conserved_value(const Network& net, const Vec& v, const History& psi);
double conserved_value(const Network& net, const Vec& v, const Trajectory& traj, double t);

/// S-perp projection norm of the class-membership residual between two
/// histories ending at t = 0; zero (up to tolerance) iff they define the
/// same delayed compatibility class.
double class_distance(const Network& net, const History& theta, const History& psi);

} // namespace crn
