#include "crn/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "crn/equilibria.hpp"
#include "crn/errors.hpp"
#include "crn/quadrature.hpp"

namespace crn {

double v_point(const Network& net, const Vec& x, const Vec& reference) {
  require_positive(x, "v_point");
  require_positive(reference, "v_point");
  double v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& tr = net.species[i].transform;
    v += tr.log_antideriv(x[i]) - tr.log_antideriv(reference[i]) -
         tr.log_eval(reference[i]) * (x[i] - reference[i]);
  }
  return v;
}

namespace {

double krasovskii_fn(const Network& net, const std::function<Vec(double)>& psi,
                     const Vec& reference, const std::vector<double>& breakpoints) {
  require_positive(reference, "v_krasovskii");
  const Vec psi0 = psi(0.0);
  require_positive(psi0, "v_krasovskii");
  double v = v_point(net, psi0, reference);

  Vec log_gamma_ref(reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i)
    log_gamma_ref[i] = net.species[i].transform.log_eval(reference[i]);

  for (std::size_t k = 0; k < net.reaction_count(); ++k) {
    const auto& r = net.reactions[k];
    if (r.delay <= 0.0) continue;
    const auto& ys = net.complexes[r.source].stoich;
    double log_b = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) log_b += ys[i] * log_gamma_ref[i];
    const double b = std::exp(log_b);
    std::vector<double> edges{-r.delay};
    for (double brk : breakpoints)
      if (brk > -r.delay + 1e-12 && brk < -1e-12) edges.push_back(brk);
    edges.push_back(0.0);
    std::sort(edges.begin(), edges.end());
    const double hq = net.tau_max() / 64.0;
    // a (log a - log b - 1) + b >= 0 with equality iff a == b
    auto integrand = [&](double s) {
      const Vec xs = psi(s);
      double log_a = 0.0;
      for (std::size_t i = 0; i < ys.size(); ++i)
        log_a += ys[i] * net.species[i].transform.log_eval(xs[i]);
      const double a = std::exp(log_a);
      return a * (log_a - log_b - 1.0) + b;
    };
    double integral = 0.0;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      const double len = edges[e + 1] - edges[e];
      int panels = hq > 0.0 ? static_cast<int>(std::ceil(len / hq - 1e-12)) : 4;
      panels = std::max(panels, edges.size() == 2 ? 4 : 2);
      integral += integrate_gl5(integrand, edges[e], edges[e + 1], panels);
    }
    v += r.rate * integral;
  }
  return v;
}

} // namespace

double v_krasovskii(const Network& net, const History& psi, const Vec& reference) {
  if (std::abs(psi.t_hi()) > 1e-12) throw ModelError("history must end at time 0");
  return krasovskii_fn(net, [&](double s) { return psi.eval(s); }, reference, {});
}

double v_krasovskii(const Network& net, const Trajectory& traj, double t,
                    const Vec& reference) {
  // the dense output has a slope kink where the integration started
  return krasovskii_fn(net, [&](double s) { return traj.eval(t + s); }, reference, {-t});
}

DecreaseReport decrease_report(const Network& net, const Trajectory& traj,
                               const Vec& reference, int stride) {
  DecreaseReport report;
  report.reference_balanced = check_complex_balance(net, reference, 1e-8).passed;

  const auto& mesh = traj.mesh();
  std::size_t j = 0;
  while (j < mesh.size()) {
    report.times.push_back(mesh[j]);
    report.values.push_back(v_krasovskii(net, traj, mesh[j], reference));
    std::size_t step = stride > 0 ? static_cast<std::size_t>(stride)
                                  : (mesh[j] <= 10.0 ? 1 : 10);
    if (j == mesh.size() - 1) break;
    j = std::min(j + step, mesh.size() - 1);
  }

  report.max_increase = -std::numeric_limits<double>::infinity();
  report.max_scaled_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < report.values.size(); ++i) {
    const double diff = report.values[i + 1] - report.values[i];
    report.max_increase = std::max(report.max_increase, diff);
    report.max_scaled_increase =
        std::max(report.max_scaled_increase, diff / (1.0 + report.values[i]));
  }
  report.passed = report.max_scaled_increase <= report.tolerance;
  return report;
}

Vec q_values(const Network& net, const Vec& x, const Vec& reference) {
  const Vec d = sub(rho(net, x), rho(net, reference));
  Vec q(net.complex_count(), 0.0);
  for (std::size_t l = 0; l < net.complex_count(); ++l) {
    const auto& y = net.complexes[l].stoich;
    for (std::size_t i = 0; i < d.size(); ++i) q[l] += d[i] * y[i];
  }
  return q;
}

} // namespace crn
