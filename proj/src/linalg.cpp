#include "crn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crn {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec scaled(const Vec& a, double t) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * t;
  return r;
}

void axpy(Vec& y, double t, const Vec& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += t * x[i];
}

Vec Mat::mul(const Vec& x) const {
  Vec r(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * x[j];
  return r;
}

Vec Mat::tmul(const Vec& x) const {
  Vec r(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r[j] += (*this)(i, j) * x[i];
  return r;
}

bool cholesky_factor(Mat& a) {
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double l = std::sqrt(d);
    a(j, j) = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / l;
    }
    for (std::size_t k = j + 1; k < n; ++k) a(j, k) = 0.0;
  }
  return true;
}

Vec cholesky_solve(const Mat& l, const Vec& rhs) {
  const std::size_t n = l.rows();
  Vec y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = rhs[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  Vec x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
    x[ii] = s / l(ii, ii);
  }
  return x;
}

namespace {

void deflate(Vec& v, const std::vector<Vec>& basis) {
  // two passes for orthogonality near machine precision
  for (int pass = 0; pass < 2; ++pass)
    for (const Vec& q : basis) axpy(v, -dot(q, v), q);
}

} // namespace

std::vector<Vec> orthonormal_span(const std::vector<Vec>& cols, double rel_tol) {
  std::vector<Vec> work = cols;
  std::vector<Vec> basis;
  double max_norm = 0.0;
  for (const Vec& c : work) max_norm = std::max(max_norm, norm2(c));
  if (max_norm == 0.0) return basis;
  const double cutoff = rel_tol * max_norm;

  std::vector<bool> used(work.size(), false);
  for (;;) {
    std::size_t best = work.size();
    double best_norm = cutoff;
    for (std::size_t j = 0; j < work.size(); ++j) {
      if (used[j]) continue;
      const double n = norm2(work[j]);
      if (n > best_norm) {
        best_norm = n;
        best = j;
      }
    }
    if (best == work.size()) break;
    used[best] = true;
    Vec q = work[best];
    deflate(q, basis);
    const double n = norm2(q);
    if (n <= cutoff) continue;
    basis.push_back(scaled(q, 1.0 / n));
    for (std::size_t j = 0; j < work.size(); ++j)
      if (!used[j]) axpy(work[j], -dot(basis.back(), work[j]), basis.back());
  }
  return basis;
}

std::vector<Vec> orthonormal_complement(const std::vector<Vec>& basis, std::size_t n) {
  std::vector<Vec> added;
  while (basis.size() + added.size() < n) {
    std::size_t best = n;
    double best_norm = -1.0;
    Vec best_vec;
    for (std::size_t i = 0; i < n; ++i) {
      Vec e(n, 0.0);
      e[i] = 1.0;
      deflate(e, basis);
      deflate(e, added);
      const double nn = norm2(e);
      if (nn > best_norm) {
        best_norm = nn;
        best = i;
        best_vec = e;
      }
    }
    if (best == n || best_norm <= 1e-8)
      throw std::logic_error("orthonormal_complement: failed to complete basis");
    added.push_back(scaled(best_vec, 1.0 / best_norm));
  }
  return added;
}

} // namespace crn
