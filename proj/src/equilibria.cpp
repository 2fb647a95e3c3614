#include "crn/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "crn/errors.hpp"
#include "crn/quadrature.hpp"
#include "crn/sim.hpp"

namespace crn {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBalanceTol = 1e-8; // acceptance tolerance for a reference
}

bool is_equilibrium(const Network& net, const Vec& x, double tol) {
  require_positive(x, "is_equilibrium");
  return norm_inf(formation_rate(net, x)) <= tol;
}

BalanceReport check_complex_balance(const Network& net, const Vec& x, double tol) {
  require_positive(x, "check_complex_balance");
  BalanceReport report;
  report.tolerance = tol;
  report.per_complex.assign(net.complex_count(), {0.0, 0.0});
  for (std::size_t k = 0; k < net.reaction_count(); ++k) {
    const auto& r = net.reactions[k];
    const double w = r.rate * detail::monomial_nonneg(net, r.source, x);
    report.per_complex[r.product].first += w;  // inflow
    report.per_complex[r.source].second += w;  // outflow
  }
  for (const auto& [in, out] : report.per_complex)
    report.residual_norm = std::max(report.residual_norm, std::abs(in - out));
  report.passed = report.residual_norm <= tol;
  return report;
}

bool equilibrium_set_contains(const Network& net, const StoichBasis& basis,
                              const Vec& reference, const Vec& x, double tol) {
  require_positive(reference, "equilibrium_set_contains");
  require_positive(x, "equilibrium_set_contains");
  const Vec d = sub(rho(net, x), rho(net, reference));
  return norm_inf(basis.project_s(d)) <= tol;
}

bool equilibrium_set_contains(const Network& net, const Vec& reference, const Vec& x,
                              double tol) {
  return equilibrium_set_contains(net, stoich_bases(net), reference, x, tol);
}

CertificateReport quasi_thermo_certificate(const Network& net, const Vec& reference,
                                           int samples, std::uint64_t seed,
                                           double lo_factor, double hi_factor) {
  require_positive(reference, "quasi_thermo_certificate");
  if (samples < 1) throw ModelError("quasi_thermo_certificate: samples must be >= 1");

  CertificateReport report;
  report.samples = samples;
  report.seed = seed;
  report.lo_factor = lo_factor;
  report.hi_factor = hi_factor;
  report.reference_balanced = check_complex_balance(net, reference, kBalanceTol).passed;
  report.max_inner = -kInf;

  const StoichBasis basis = stoich_bases(net);
  const Vec rho_ref = rho(net, reference);
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Vec x(reference.size());
  for (int n = 0; n < samples; ++n) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double lo = std::log(lo_factor * reference[i]);
      const double hi = std::log(hi_factor * reference[i]);
      x[i] = std::exp(lo + unif(gen) * (hi - lo));
    }
    const double inner = dot(sub(rho(net, x), rho_ref), formation_rate(net, x));
    report.max_inner = std::max(report.max_inner, inner);
    if (inner > 1e-12) ++report.violations;
    if (std::abs(inner) <= 1e-12) {
      ++report.near_zero;
      if (equilibrium_set_contains(net, basis, reference, x, 1e-6))
        ++report.near_zero_in_set;
    }
  }
  report.passed = report.max_inner <= 1e-12;
  return report;
}

bool ClassEquilibriumProblem::in_domain(const Vec& mu) const {
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double u = gamma_ref[i] * std::exp(mu[i]);
    if (!(u < net->species[i].transform.sigma()) || !std::isfinite(u)) return false;
  }
  return true;
}

double ClassEquilibriumProblem::g(const Vec& mu) const {
  if (!in_domain(mu)) return kInf;
  const std::size_t n = mu.size();
  double val = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& tr = net->species[i].transform;
    const double gr = gamma_ref[i];
    const int panels = std::max(4, static_cast<int>(std::ceil(std::abs(mu[i]) * 16.0)));
    val += integrate_gl5([&](double s) { return tr.inverse(gr * std::exp(s)); }, 0.0,
                         mu[i], panels);
    val += reference[i] - b[i] * mu[i];
  }
  for (std::size_t k = 0; k < net->reaction_count(); ++k) {
    const auto& r = net->reactions[k];
    if (r.delay <= 0.0) continue;
    const auto& ys = net->complexes[r.source].stoich;
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e += ys[i] * (log_gamma_ref[i] + mu[i]);
    val += r.rate * r.delay * std::exp(e);
  }
  return val;
}

Vec ClassEquilibriumProblem::grad(const Vec& mu) const {
  const std::size_t n = mu.size();
  Vec gvec(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = gamma_ref[i] * std::exp(mu[i]);
    gvec[i] = net->species[i].transform.inverse(u) - b[i];
  }
  for (std::size_t k = 0; k < net->reaction_count(); ++k) {
    const auto& r = net->reactions[k];
    if (r.delay <= 0.0) continue;
    const auto& ys = net->complexes[r.source].stoich;
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e += ys[i] * (log_gamma_ref[i] + mu[i]);
    const double w = r.rate * r.delay * std::exp(e);
    for (std::size_t i = 0; i < n; ++i) gvec[i] += w * ys[i];
  }
  return gvec;
}

Mat ClassEquilibriumProblem::hess(const Vec& mu) const {
  const std::size_t n = mu.size();
  Mat h(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& tr = net->species[i].transform;
    const double u = gamma_ref[i] * std::exp(mu[i]);
    h(i, i) = u / tr.derivative(tr.inverse(u));
  }
  for (std::size_t k = 0; k < net->reaction_count(); ++k) {
    const auto& r = net->reactions[k];
    if (r.delay <= 0.0) continue;
    const auto& ys = net->complexes[r.source].stoich;
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e += ys[i] * (log_gamma_ref[i] + mu[i]);
    const double w = r.rate * r.delay * std::exp(e);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h(i, j) += w * ys[i] * ys[j];
  }
  return h;
}

Vec ClassEquilibriumProblem::lift(const Vec& z) const {
  Vec mu(reference.size(), 0.0);
  for (std::size_t j = 0; j < z.size(); ++j) axpy(mu, z[j], basis.s_perp_basis[j]);
  return mu;
}

double ClassEquilibriumProblem::g_reduced(const Vec& z) const { return g(lift(z)); }

Vec ClassEquilibriumProblem::grad_reduced(const Vec& z) const {
  const Vec full = grad(lift(z));
  Vec r(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) r[j] = dot(basis.s_perp_basis[j], full);
  return r;
}

Mat ClassEquilibriumProblem::hess_reduced(const Vec& z) const {
  const Mat full = hess(lift(z));
  const std::size_t m = z.size();
  Mat r(m, m, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    const Vec ha = full.mul(basis.s_perp_basis[a]);
    for (std::size_t bidx = 0; bidx < m; ++bidx)
      r(bidx, a) = dot(basis.s_perp_basis[bidx], ha);
  }
  return r;
}

ClassEquilibriumProblem make_class_problem(const Network& net, const Vec& reference,
                                           const History& theta) {
  require_positive(reference, "class equilibrium reference");
  if (!check_complex_balance(net, reference, kBalanceTol).passed)
    throw NumericError("reference not complex balanced");
  if (std::abs(theta.t_hi()) > 1e-12)
    throw ModelError("initial history must end at time 0");
  if (!theta.extends_left() && theta.t_lo() > -net.tau_max() + 1e-12)
    throw ModelError("initial history does not cover [-tau_max, 0]");
  if (!theta.strictly_positive()) throw DomainError("theta not positive");

  ClassEquilibriumProblem problem;
  problem.net = &net;
  problem.reference = reference;
  problem.theta0 = theta.eval(0.0);
  const std::size_t n = net.species_count();
  problem.gamma_ref.resize(n);
  problem.log_gamma_ref.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    problem.gamma_ref[i] = net.species[i].transform.eval(reference[i]);
    problem.log_gamma_ref[i] = net.species[i].transform.log_eval(reference[i]);
  }
  problem.basis = stoich_bases(net);

  problem.b = problem.theta0;
  problem.history_integrals.assign(net.reaction_count(), 0.0);
  for (std::size_t k = 0; k < net.reaction_count(); ++k) {
    const auto& r = net.reactions[k];
    if (r.delay <= 0.0) continue;
    const double integral = delay_integral(net, k, [&](double s) { return theta.eval(s); });
    problem.history_integrals[k] = integral;
    const auto& ys = net.complexes[r.source].stoich;
    for (std::size_t i = 0; i < n; ++i) problem.b[i] += r.rate * integral * ys[i];
  }
  for (double bi : problem.b)
    if (!(bi > 0.0)) throw NumericError("class equilibrium: offset vector not positive");
  return problem;
}

ClassEquilibriumResult solve_class_equilibrium(const Network& net, const Vec& reference,
                                               const History& theta,
                                               const ClassEquilibriumOptions& opts) {
  const ClassEquilibriumProblem problem = make_class_problem(net, reference, theta);
  const std::size_t m = problem.basis.s_perp_basis.size();

  ClassEquilibriumResult res;
  Vec z(m, 0.0);
  double gz = problem.g_reduced(z);
  res.g_history.push_back(gz);

  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const Vec grad = problem.grad_reduced(z);
    res.grad_norm = norm_inf(grad);
    if (res.grad_norm <= opts.grad_tol) break;

    Mat h = problem.hess_reduced(z);
    if (!cholesky_factor(h)) {
      res.cholesky_ok = false;
      throw NumericError("class equilibrium: Hessian not positive definite");
    }
    const Vec d = scaled(cholesky_solve(h, grad), -1.0);
    const double slope = dot(grad, d);

    // full Newton step first, then halve; small slack absorbs quadrature
    // noise in g near the optimum
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      Vec zt = z;
      axpy(zt, t, d);
      const double val = problem.g_reduced(zt);
      if (val <= gz + 1e-4 * t * slope + 1e-12 * (1.0 + std::abs(gz))) {
        z = zt;
        gz = val;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) throw NumericError("class equilibrium: line search failed");
    res.g_history.push_back(gz);
  }
  if (it >= opts.max_iterations)
    throw NumericError("class equilibrium: Newton did not converge");
  res.iterations = it;

  res.mu = problem.lift(z);
  res.x.resize(net.species_count());
  for (std::size_t i = 0; i < res.x.size(); ++i)
    res.x[i] = net.species[i].transform.inverse(problem.gamma_ref[i] * std::exp(res.mu[i]));

  res.equilibrium_residual = norm_inf(formation_rate(net, res.x));

  // membership residual of the constant extension of x in D_theta
  Vec resid = sub(res.x, problem.theta0);
  for (std::size_t k = 0; k < net.reaction_count(); ++k) {
    const auto& r = net.reactions[k];
    if (r.delay <= 0.0) continue;
    const double gx = detail::monomial_nonneg(net, r.source, res.x);
    const auto& ys = net.complexes[r.source].stoich;
    for (std::size_t i = 0; i < resid.size(); ++i)
      resid[i] += r.rate * (r.delay * gx - problem.history_integrals[k]) * ys[i];
  }
  res.class_residual = norm_inf(problem.basis.project_s_perp(resid));
  if (res.class_residual > 1e-8)
    throw NumericError("class equilibrium: membership residual " +
                       std::to_string(res.class_residual) + " exceeds 1e-8");
  return res;
}

Vec class_equilibrium(const Network& net, const Vec& reference, const History& theta) {
  return solve_class_equilibrium(net, reference, theta).x;
}

} // namespace crn
