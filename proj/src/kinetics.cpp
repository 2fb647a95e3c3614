#include "crn/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "crn/errors.hpp"

namespace crn {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

RateTransform RateTransform::make(double alpha, double p, double c, double q) {
  RateTransform tr{alpha, p, c, q};
  tr.validate();
  return tr;
}

void RateTransform::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ModelError("invalid transform parameters: alpha must be positive");
  if (!(p > 0.0) || !std::isfinite(p))
    throw ModelError("invalid transform parameters: p must be positive");
  if (!(q >= 0.0) || !std::isfinite(q))
    throw ModelError("invalid transform parameters: q must be nonnegative");
  if (!(c >= 0.0) || !std::isfinite(c))
    throw ModelError("invalid transform parameters: c must be nonnegative");
  if (p < q)
    throw ModelError("invalid transform parameters: p >= q required for monotonicity");
  if (q > 0.0 && !(c > 0.0))
    throw ModelError("invalid transform parameters: c must be positive when q > 0");
}

double RateTransform::sigma() const {
  if (p > q) return kInf;
  return alpha; // p == q, c > 0
}

double RateTransform::eval(double s) const {
  if (s < 0.0) throw DomainError("gamma: negative argument");
  if (s == 0.0) return 0.0;
  if (q == 0.0) return alpha * std::pow(s, p);
  return alpha * std::pow(s, p) / std::pow(c + s, q);
}

double RateTransform::log_eval(double s) const {
  if (!(s > 0.0)) throw DomainError("log gamma: argument must be positive");
  double v = std::log(alpha) + p * std::log(s);
  if (q != 0.0) v -= q * std::log(c + s);
  return v;
}

double RateTransform::derivative(double s) const {
  if (!(s > 0.0)) throw DomainError("gamma': argument must be positive");
  return eval(s) * (p * (c + s) - q * s) / (s * (c + s));
}

double RateTransform::inverse(double u) const {
  if (u < 0.0) throw DomainError("gamma^{-1}: negative argument");
  if (u == 0.0) return 0.0;
  if (u >= sigma()) throw NumericError("saturation exceeded");

  // bracket [0, hi] with gamma(hi) > u
  double hi = std::max(1.0, c);
  int doublings = 0;
  while (eval(hi) <= u) {
    hi *= 2.0;
    if (++doublings > 1024) throw NumericError("gamma^{-1}: bracketing failed");
  }
  double lo = 0.0;
  double s = 0.5 * hi;

  for (int it = 0; it < 100; ++it) {
    const double f = eval(s) - u;
    if (f > 0.0)
      hi = s;
    else
      lo = s;
    if (std::abs(f) <= 4e-16 * u) break; // residual at the roundoff floor of u
    const double df = derivative(s);
    double next = s - f / df;
    if (!(next > lo) || !(next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - s);
    s = next;
    if (step <= 4e-16 * std::abs(s)) break;
  }
  if (std::abs(eval(s) - u) <= 1e-12 * (1.0 + u)) return s;
  throw NumericError("gamma^{-1}: did not converge");
}

double RateTransform::log_antideriv(double s) const {
  if (!(s > 0.0)) throw DomainError("log-gamma antiderivative: argument must be positive");
  double v = s * std::log(alpha) + p * (s * std::log(s) - s);
  if (q != 0.0) v -= q * ((c + s) * std::log(c + s) - s - c * std::log(c));
  return v;
}

} // namespace crn
