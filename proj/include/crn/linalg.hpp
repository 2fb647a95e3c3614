#pragma once

#include <cstddef>
#include <vector>

namespace crn {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
double norm_inf(const Vec& a);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scaled(const Vec& a, double t);
void axpy(Vec& y, double t, const Vec& x); // y += t*x

/// Dense row-major matrix. Small sizes only; no views, no BLAS.
class Mat {
public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Vec mul(const Vec& x) const;  // A x
  Vec tmul(const Vec& x) const; // A^T x

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

/// In-place lower-triangular Cholesky A = L L^T.
/// Returns false when A is not (numerically) positive definite.
bool cholesky_factor(Mat& a);

/// Solves L L^T x = rhs given the factor from cholesky_factor.
Vec cholesky_solve(const Mat& l, const Vec& rhs);

/// Orthonormal basis of span(cols) by pivoted modified Gram-Schmidt with
/// reorthogonalization. A column is treated as dependent once its residual
/// norm drops below rel_tol times the largest input column norm.
std::vector<Vec> orthonormal_span(const std::vector<Vec>& cols, double rel_tol);

/// Completes an orthonormal set to a full basis of R^n using coordinate
/// directions; returns only the added vectors (a basis of the complement).
std::vector<Vec> orthonormal_complement(const std::vector<Vec>& basis, std::size_t n);

} // namespace crn
