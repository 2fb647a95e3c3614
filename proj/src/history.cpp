#include "crn/history.hpp"

#include <algorithm>
#include <cmath>

#include "crn/errors.hpp"

namespace crn {

Vec hermite_eval(double t, double t0, double t1, const Vec& x0, const Vec& d0,
                 const Vec& x1, const Vec& d1) {
  const double h = t1 - t0;
  const double u = (t - t0) / h;
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  const double h10 = u3 - 2.0 * u2 + u;
  const double h01 = -2.0 * u3 + 3.0 * u2;
  const double h11 = u3 - u2;
  Vec r(x0.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = h00 * x0[i] + h10 * h * d0[i] + h01 * x1[i] + h11 * h * d1[i];
  return r;
}

History History::constant(Vec value, double t_lo, double t_hi) {
  if (!(t_hi > t_lo)) throw ModelError("history: t_hi must exceed t_lo");
  History h;
  const Vec zero(value.size(), 0.0);
  h.append(t_lo, value, zero);
  h.append(t_hi, std::move(value), zero);
  h.extends_left_ = true;
  return h;
}

History History::from_knots(const std::vector<double>& times, const std::vector<Vec>& values) {
  if (times.size() != values.size() || times.size() < 2)
    throw ModelError("history: need at least two knots");
  for (std::size_t j = 1; j < times.size(); ++j)
    if (!(times[j] > times[j - 1])) throw ModelError("history: knot times must increase");
  const std::size_t n = times.size();
  const std::size_t dim = values.front().size();
  for (const Vec& v : values)
    if (v.size() != dim) throw ModelError("history: knot values must share one dimension");

  // natural-spline slopes, one tridiagonal solve per component
  std::vector<Vec> slopes(n, Vec(dim, 0.0));
  std::vector<double> h(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) h[j] = times[j + 1] - times[j];
  for (std::size_t comp = 0; comp < dim; ++comp) {
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
    b[0] = 2.0;
    c[0] = 1.0;
    d[0] = 3.0 * (values[1][comp] - values[0][comp]) / h[0];
    for (std::size_t j = 1; j + 1 < n; ++j) {
      a[j] = 1.0 / h[j - 1];
      b[j] = 2.0 * (1.0 / h[j - 1] + 1.0 / h[j]);
      c[j] = 1.0 / h[j];
      d[j] = 3.0 * ((values[j][comp] - values[j - 1][comp]) / (h[j - 1] * h[j - 1]) +
                    (values[j + 1][comp] - values[j][comp]) / (h[j] * h[j]));
    }
    a[n - 1] = 1.0;
    b[n - 1] = 2.0;
    d[n - 1] = 3.0 * (values[n - 1][comp] - values[n - 2][comp]) / h[n - 2];
    // Thomas algorithm
    for (std::size_t j = 1; j < n; ++j) {
      const double w = a[j] / b[j - 1];
      b[j] -= w * c[j - 1];
      d[j] -= w * d[j - 1];
    }
    slopes[n - 1][comp] = d[n - 1] / b[n - 1];
    for (std::size_t jj = n - 1; jj-- > 0;)
      slopes[jj][comp] = (d[jj] - c[jj] * slopes[jj + 1][comp]) / b[jj];
  }

  History out;
  for (std::size_t j = 0; j < n; ++j) out.append(times[j], values[j], slopes[j]);
  out.extends_left_ = true;
  return out;
}

void History::append(double t, Vec state, Vec deriv) {
  if (!mesh_.empty() && !(t > mesh_.back()))
    throw ModelError("history: mesh times must strictly increase");
  mesh_.push_back(t);
  states_.push_back(std::move(state));
  derivs_.push_back(std::move(deriv));
}

Vec History::eval(double t) const {
  if (empty()) throw ModelError("history: empty");
  if (t <= mesh_.front()) {
    if (t == mesh_.front() || extends_left_) return states_.front();
    throw DomainError("history: evaluation left of the mesh");
  }
  if (t >= mesh_.back()) {
    if (t <= mesh_.back() + 1e-9 * (1.0 + std::abs(mesh_.back()))) return states_.back();
    throw DomainError("history: evaluation right of the mesh");
  }
  const auto it = std::upper_bound(mesh_.begin(), mesh_.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - mesh_.begin()) - 1;
  return hermite_eval(t, mesh_[j], mesh_[j + 1], states_[j], derivs_[j], states_[j + 1],
                      derivs_[j + 1]);
}

bool History::strictly_positive() const {
  for (const Vec& x : states_)
    for (double v : x)
      if (!(v > 0.0)) return false;
  // sample interiors; Hermite segments can undershoot their endpoints
  for (std::size_t j = 0; j + 1 < mesh_.size(); ++j) {
    for (int s = 1; s < 8; ++s) {
      const double t = mesh_[j] + (mesh_[j + 1] - mesh_[j]) * (s / 8.0);
      for (double v : eval(t))
        if (!(v > 0.0)) return false;
    }
  }
  return true;
}

} // namespace crn
