#pragma once

#include <vector>

#include "crn/linalg.hpp"

namespace crn {

/// Piecewise cubic Hermite curve on a strictly increasing time mesh, with
/// optional constant extension left of the mesh. Initial conditions for the
/// delay equations are histories whose domain ends at t = 0.
class History {
public:
  History() = default;

  /// Constant function on [t_lo, t_hi] (extends left).
  static History constant(Vec value, double t_lo, double t_hi);

  /// Interpolates the knots with a natural cubic spline (zero curvature at
  /// both ends) stored in Hermite form; extends left of the first knot.
  static History from_knots(const std::vector<double>& times, const std::vector<Vec>& values);

  void append(double t, Vec state, Vec deriv);

  Vec eval(double t) const;

  double t_lo() const { return mesh_.front(); }
  double t_hi() const { return mesh_.back(); }
  std::size_t size() const { return mesh_.size(); }
  bool empty() const { return mesh_.empty(); }

  const std::vector<double>& mesh() const { return mesh_; }
  const std::vector<Vec>& states() const { return states_; }
  const std::vector<Vec>& derivs() const { return derivs_; }

  bool extends_left() const { return extends_left_; }
  void set_extends_left(bool v) { extends_left_ = v; }

  /// True when the curve stays strictly positive (sampled within segments).
  bool strictly_positive() const;

private:
  std::vector<double> mesh_;
  std::vector<Vec> states_;
  std::vector<Vec> derivs_;
  bool extends_left_ = false;
};

/// Cubic Hermite evaluation on [t0, t1] from endpoint values and slopes.
Vec hermite_eval(double t, double t0, double t1, const Vec& x0, const Vec& d0,
                 const Vec& x1, const Vec& d1);

} // namespace crn
