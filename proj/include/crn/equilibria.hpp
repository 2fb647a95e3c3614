#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "crn/history.hpp"
#include "crn/network.hpp"

namespace crn {

/// Per-complex inflow/outflow bookkeeping for the balance test.
struct BalanceReport {
  double residual_norm = 0.0; // max |inflow - outflow| over complexes
  std::vector<std::pair<double, double>> per_complex; // (inflow, outflow)
  double tolerance = 0.0;
  bool passed = false;
};

/// True iff the formation rate vanishes: ||f(x)||_inf <= tol.
bool is_equilibrium(const Network& net, const Vec& x, double tol);

/// Complex balance at x: for every complex, total inflow equals total
/// outflow (equivalently K~ Gamma(x) = 0).
BalanceReport check_complex_balance(const Network& net, const Vec& x, double tol);

/// Membership in the equilibrium set E of a complex balanced reference:
/// rho(x) - rho(reference) lies in S-perp (projection onto S below tol).
bool equilibrium_set_contains(const Network& net, const StoichBasis& basis,
                              const Vec& reference, const Vec& x, double tol);
bool equilibrium_set_contains(const Network& net, const Vec& reference, const Vec& x,
                              double tol);

/// Sampled dissipation certificate: draws log-uniform states around the
/// reference and reports the largest value of (rho(x)-rho(x~)) . f(x),
/// which is nonpositive for complex balanced systems.
struct CertificateReport {
  int samples = 0;
  std::uint64_t seed = 0;
  double lo_factor = 0.1, hi_factor = 10.0;
  double max_inner = 0.0;     // max over samples of the dissipation inner product
  int violations = 0;         // samples with inner > 1e-12
  int near_zero = 0;          // samples with |inner| <= 1e-12
  int near_zero_in_set = 0;   // of those, how many pass the E-membership test
  bool reference_balanced = false;
  bool passed = false;        // max_inner <= 1e-12
};

CertificateReport quasi_thermo_certificate(const Network& net, const Vec& reference,
                                           int samples, std::uint64_t seed,
                                           double lo_factor = 0.1,
                                           double hi_factor = 10.0);

/// The strictly convex objective whose minimizer over S-perp identifies the
/// unique positive equilibrium of the delayed compatibility class of theta:
///
///   g(x)  = sum_i (int_0^{x_i} gamma_i^{-1}(gamma_i(x~_i) e^s) ds
///                  + x~_i - b_i x_i)
///          + sum_k kappa_k tau_k (gamma(x~) e^x)^{y_k}
///   b     = theta(0) + sum_k kappa_k (int_{-tau_k}^0 gamma^{y_k}(theta)) y_k
///
/// with x~ the complex balanced reference. The argmin mu over S-perp gives
/// the equilibrium gamma^{-1}(gamma(x~) e^mu).
struct ClassEquilibriumProblem {
  const Network* net = nullptr;
  Vec reference;     // x~, complex balanced
  Vec gamma_ref;     // gamma_i(x~_i)
  Vec log_gamma_ref; // log gamma_i(x~_i)
  Vec b;
  Vec theta0;               // theta(0)
  Vec history_integrals;    // per reaction: int_{-tau_k}^0 gamma^{y_k}(theta)
  StoichBasis basis;

  bool in_domain(const Vec& mu) const; // gamma_ref_i e^{mu_i} < sigma_i
  double g(const Vec& mu) const;       // +inf outside the domain
  Vec grad(const Vec& mu) const;
  Mat hess(const Vec& mu) const;

  // reduced functions in S-perp coordinates z (mu = B_perp z)
  Vec lift(const Vec& z) const;
  double g_reduced(const Vec& z) const;
  Vec grad_reduced(const Vec& z) const;
  Mat hess_reduced(const Vec& z) const;
};

ClassEquilibriumProblem make_class_problem(const Network& net, const Vec& reference,
                                           const History& theta);

struct ClassEquilibriumOptions {
  int max_iterations = 200;
  double grad_tol = 1e-10;
};

struct ClassEquilibriumResult {
  Vec x;                  // the class equilibrium
  Vec mu;                 // rho(x) - rho(reference), in S-perp
  int iterations = 0;
  double grad_norm = 0.0; // reduced gradient inf-norm at exit
  bool cholesky_ok = true;
  std::vector<double> g_history; // objective value at each iterate
  double class_residual = 0.0;   // membership residual of x in D_theta
  double equilibrium_residual = 0.0; // ||f(x)||_inf
};

/// Damped Newton (backtracking Armijo line search, full step first) on the
/// reduced coordinates, started at z = 0. Throws NumericError when the
/// reference is not complex balanced, theta is not positive, or the solver
/// fails to converge.
ClassEquilibriumResult solve_class_equilibrium(const Network& net, const Vec& reference,
                                               const History& theta,
                                               const ClassEquilibriumOptions& opts = {});

/// Convenience wrapper returning just the equilibrium state.
Vec class_equilibrium(const Network& net, const Vec& reference, const History& theta);

} // namespace crn
