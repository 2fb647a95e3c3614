#pragma once

#include <array>
#include <cmath>

namespace crn {

// 5-point Gauss-Legendre rule on [-1, 1]; exact for polynomials up to degree 9.
inline constexpr std::array<double, 5> kGl5Nodes = {
    -0.90617984593866399, -0.53846931010568309, 0.0,
    0.53846931010568309, 0.90617984593866399};
inline constexpr std::array<double, 5> kGl5Weights = {
    0.23692688505618909, 0.47862867049936647, 0.56888888888888889,
    0.47862867049936647, 0.23692688505618909};

/// Composite 5-point Gauss-Legendre quadrature of f over [a, b].
template <typename F>
double integrate_gl5(F&& f, double a, double b, int panels) {
  if (a == b || panels <= 0) return 0.0;
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int pnl = 0; pnl < panels; ++pnl) {
    const double lo = a + pnl * h;
    const double mid = lo + 0.5 * h;
    double acc = 0.0;
    for (std::size_t i = 0; i < kGl5Nodes.size(); ++i)
      acc += kGl5Weights[i] * f(mid + 0.5 * h * kGl5Nodes[i]);
    total += 0.5 * h * acc;
  }
  return total;
}

/// Panel count for delay integrals: h_q = tau_max/64, at least 4 panels.
inline int delay_panels(double tau, double tau_max) {
  if (tau <= 0.0) return 0;
  const double hq = tau_max / 64.0;
  int panels = (hq > 0.0) ? static_cast<int>(std::ceil(tau / hq - 1e-12)) : 4;
  return panels < 4 ? 4 : panels;
}

} // namespace crn
