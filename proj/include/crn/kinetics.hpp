#pragma once

namespace crn {

/// One species' rate transform
///
///   gamma(s) = alpha * s^p / (c + s)^q
///
/// strictly increasing on (0, inf) with gamma(0) = 0. Requires alpha > 0,
/// p > 0, p >= q >= 0, c >= 0, and c > 0 whenever q > 0. The range is
/// [0, sigma) with sigma = alpha when p == q and sigma = inf when p > q.
/// The identity (mass action) is alpha=1, p=1, c=0, q=0.
///
/// The closed forms below (log, derivative, antiderivative of the log) are
/// what the Lyapunov machinery consumes; the inverse is solved numerically
/// on the monotone branch.
struct RateTransform {
  double alpha = 1.0;
  double p = 1.0;
  double c = 0.0;
  double q = 0.0;

  static RateTransform identity() { return RateTransform{1.0, 1.0, 0.0, 0.0}; }
  static RateTransform make(double alpha, double p, double c, double q);

  /// Throws ModelError when the parameters violate the family's constraints.
  void validate() const;

  /// Saturation bound sigma = lim_{s->inf} gamma(s).
  double sigma() const;

  /// gamma(s), s >= 0.
  double eval(double s) const;

  /// log gamma(s) = log alpha + p log s - q log(c+s), s > 0.
  double log_eval(double s) const;

  /// gamma'(s) = gamma(s) * (p(c+s) - q s) / (s(c+s)), s > 0.
  double derivative(double s) const;

  /// gamma^{-1}(u) for 0 <= u < sigma. Bracketing plus safeguarded Newton;
  /// throws NumericError("saturation exceeded") when u >= sigma.
  double inverse(double u) const;

  /// Antiderivative F of log gamma with F(0+) = 0:
  ///   F(s) = s log alpha + p (s log s - s) - q ((c+s) log(c+s) - s - c log c).
  double log_antideriv(double s) const;
};

} // namespace crn
