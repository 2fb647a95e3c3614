#include "crn/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crn/errors.hpp"
#include "crn/quadrature.hpp"

namespace crn {

namespace {

// Clamp tiny negative excursions to zero; below the floor the state has left
// the admissible region and the step size must shrink.
Vec guard_state(const Vec& x, double floor) {
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < -floor) throw NumericError("positivity lost, reduce dt");
    y[i] = x[i] < 0.0 ? 0.0 : x[i];
  }
  return y;
}

void check_initial_history(const Network& net, const History& theta) {
  if (theta.empty()) throw ModelError("initial history is empty");
  if (std::abs(theta.t_hi()) > 1e-12)
    throw ModelError("initial history must end at time 0");
  if (!theta.extends_left() && theta.t_lo() > -net.tau_max() + 1e-12)
    throw ModelError("initial history does not cover [-tau_max, 0]");
  if (!theta.strictly_positive()) throw DomainError("theta not positive");
}

} // namespace

Trajectory::Trajectory(const Network& net, History initial)
    : initial_(std::move(initial)) {
  (void)net;
}

double Trajectory::t_min() const {
  return initial_.extends_left() ? -std::numeric_limits<double>::infinity()
                                 : initial_.t_lo();
}

void Trajectory::append(double t, Vec state, Vec deriv) {
  mesh_.push_back(t);
  states_.push_back(std::move(state));
  derivs_.push_back(std::move(deriv));
}

Vec Trajectory::eval(double t) const {
  if (mesh_.empty() || t <= mesh_.front()) return initial_.eval(std::min(t, 0.0));
  if (t >= mesh_.back()) {
    if (t <= mesh_.back() + 1e-9 * (1.0 + std::abs(mesh_.back()))) return states_.back();
    throw DomainError("trajectory: evaluation beyond the final time");
  }
  const auto it = std::upper_bound(mesh_.begin(), mesh_.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - mesh_.begin()) - 1;
  return hermite_eval(t, mesh_[j], mesh_[j + 1], states_[j], derivs_[j], states_[j + 1],
                      derivs_[j + 1]);
}

Vec dde_rhs(const Network& net, const Trajectory& traj, double t, const Vec& xc,
            double positivity_floor) {
  const Vec xg = guard_state(xc, positivity_floor);
  Vec f(net.species_count(), 0.0);
  for (std::size_t k = 0; k < net.reaction_count(); ++k) {
    const auto& r = net.reactions[k];
    const double g_now = detail::monomial_nonneg(net, r.source, xg);
    double g_del = g_now;
    if (r.delay > 0.0)
      g_del = detail::monomial_nonneg(
          net, r.source, guard_state(traj.eval(t - r.delay), positivity_floor));
    const auto& ys = net.complexes[r.source].stoich;
    const auto& yp = net.complexes[r.product].stoich;
    for (std::size_t i = 0; i < f.size(); ++i)
      f[i] += r.rate * (g_del * yp[i] - g_now * ys[i]);
  }
  return f;
}

Trajectory simulate(const Network& net, const History& theta, const SimConfig& cfg) {
  if (!(cfg.t_end > 0.0)) throw ModelError("t_end must be positive");
  if (!(cfg.dt > 0.0)) throw ModelError("dt must be positive");
  const double min_delay = net.min_positive_delay();
  if (net.has_delays() && cfg.dt > min_delay + 1e-15)
    throw ModelError("dt must not exceed the smallest positive delay");
  check_initial_history(net, theta);

  Trajectory traj(net, theta);
  const double floor = cfg.positivity_floor;
  auto rhs = [&](double t, const Vec& xc) { return dde_rhs(net, traj, t, xc, floor); };

  const double h = cfg.dt;
  const long steps = static_cast<long>(std::ceil(cfg.t_end / h - 1e-9));
  Vec x = theta.eval(0.0);
  traj.append(0.0, x, rhs(0.0, x));

  for (long j = 0; j < steps; ++j) {
    const double t = traj.mesh()[static_cast<std::size_t>(j)];
    const Vec k1 = rhs(t, x);
    Vec xs = x;
    axpy(xs, 0.5 * h, k1);
    const Vec k2 = rhs(t + 0.5 * h, xs);
    xs = x;
    axpy(xs, 0.5 * h, k2);
    const Vec k3 = rhs(t + 0.5 * h, xs);
    xs = x;
    axpy(xs, h, k3);
    const Vec k4 = rhs(t + h, xs);
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    x = guard_state(x, floor);
    const double t_next = (j + 1) * h;
    traj.append(t_next, x, rhs(t_next, x));
  }
  return traj;
}

double delay_integral(const Network& net, std::size_t k,
                      const std::function<Vec(double)>& psi,
                      const std::vector<double>& breakpoints) {
  const double tau = net.reactions[k].delay;
  if (tau <= 0.0) return 0.0;
  const std::size_t src = static_cast<std::size_t>(net.reactions[k].source);
  auto f = [&](double s) { return detail::monomial_nonneg(net, src, psi(s)); };

  std::vector<double> edges{-tau};
  for (double b : breakpoints)
    if (b > -tau + 1e-12 && b < -1e-12) edges.push_back(b);
  edges.push_back(0.0);
  std::sort(edges.begin(), edges.end());

  const double hq = net.tau_max() / 64.0;
  double total = 0.0;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double len = edges[e + 1] - edges[e];
    int panels = hq > 0.0 ? static_cast<int>(std::ceil(len / hq - 1e-12)) : 4;
    panels = std::max(panels, edges.size() == 2 ? 4 : 2);
    total += integrate_gl5(f, edges[e], edges[e + 1], panels);
  }
  return total;
}

namespace {

double conserved_value_fn(const Network& net, const Vec& v,
                          const std::function<Vec(double)>& psi,
                          const std::vector<double>& breakpoints) {
  const StoichBasis basis = stoich_bases(net);
  if (norm_inf(basis.project_s(v)) > 1e-10 * std::max(1.0, norm_inf(v)))
    throw ModelError("conserved_value: v is not in the orthogonal complement of S");
  double val = dot(v, psi(0.0));
  for (std::size_t k = 0; k < net.reaction_count(); ++k) {
    const auto& r = net.reactions[k];
    if (r.delay <= 0.0) continue;
    const double integral = delay_integral(net, k, psi, breakpoints);
    const auto& ys = net.complexes[r.source].stoich;
    double vy = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) vy += v[i] * ys[i];
    val += r.rate * integral * vy;
  }
  return val;
}

} // namespace

double conserved_value(const Network& net, const Vec& v, const History& psi) {
  if (std::abs(psi.t_hi()) > 1e-12) throw ModelError("history must end at time 0");
  return conserved_value_fn(net, v, [&](double s) { return psi.eval(s); }, {});
}

double conserved_value(const Network& net, const Vec& v, const Trajectory& traj, double t) {
  // the dense output has a slope kink where the integration started
  return conserved_value_fn(net, v, [&](double s) { return traj.eval(t + s); }, {-t});
}

double class_distance(const Network& net, const History& theta, const History& psi) {
  if (std::abs(theta.t_hi()) > 1e-12 || std::abs(psi.t_hi()) > 1e-12)
    throw ModelError("histories must end at time 0");
  if (!theta.strictly_positive() || !psi.strictly_positive())
    throw DomainError("class_distance: histories must be strictly positive");

  Vec r = sub(psi.eval(0.0), theta.eval(0.0));
  for (std::size_t k = 0; k < net.reaction_count(); ++k) {
    const auto& rx = net.reactions[k];
    if (rx.delay <= 0.0) continue;
    const double ip = delay_integral(net, k, [&](double s) { return psi.eval(s); });
    const double it = delay_integral(net, k, [&](double s) { return theta.eval(s); });
    const auto& ys = net.complexes[rx.source].stoich;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += rx.rate * (ip - it) * ys[i];
  }
  const StoichBasis basis = stoich_bases(net);
  return norm_inf(basis.project_s_perp(r));
}

} // namespace crn
