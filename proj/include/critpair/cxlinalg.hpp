#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "critpair/errors.hpp"

namespace critpair {

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const cplx> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  ComplexMatrix adjoint() const;
  std::vector<cplx> apply(std::span<const cplx> x) const;

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(cplx s, const ComplexMatrix& a);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> data_;
};

/// LU with partial pivoting.
cplx determinant(const ComplexMatrix& a);

/// Throws SingularError when a pivot vanishes.
ComplexMatrix inverse(const ComplexMatrix& a);

/// Largest singular value by power iteration on A^H A (relative accuracy 1e-6).
double spectral_norm(const ComplexMatrix& a);

/// D (I - J/n) with D = diag(roots). Its eigenvalues are 0 and the critical
/// points of the polynomial with these roots.
ComplexMatrix companion_matrix(std::span<const cplx> roots);

/// Hessenberg reduction followed by single-shift complex QR with deflation.
/// Throws ConvergenceError after 100 * dim QR sweeps.
std::vector<cplx> eigenvalues(const ComplexMatrix& m, double tol = 1e-15);

/// |det(zI - D(I - J/n)) - z p'(z)/n| / (1 + |z p'(z)/n|).
double companion_identity_residual(std::span<const cplx> roots, cplx z);

/// Spectral norm of (A + u v^T) R - I, R the rank-one update formula for
/// the inverse. Throws SingularError when |1 + v^T A^{-1} u| < 1e-12.
double sherman_morrison_check(const ComplexMatrix& a, std::span<const cplx> u, std::span<const cplx> v);

/// Relative difference between det [[A, B], [C, D]] and
/// det(A) det(D - C A^{-1} B).
double block_determinant_check(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                               const ComplexMatrix& d);

struct DetDifference {
  double lhs;        // |det a - det b|
  double rhs_scale;  // ||a - b||_2
};
DetDifference det_difference_bound_check(const ComplexMatrix& a, const ComplexMatrix& b);

/// Constant C_k with |det A - det B| <= C_k ||A - B|| whenever k <= 8 and
/// ||A||, ||B|| <= 10: telescoping over rows gives k * 10^(k-1).
double det_difference_constant(std::size_t k);

/// Outlier-locating function for a root set split into inliers and s
/// outliers: the s x s determinant
///   det(zI - D_out + (1/n) D_out J - (1/n^2) (1^T G D_in 1) D_out J)
/// with G = (zI - D_in + (1/n) D_in J)^{-1}. The quadratic form collapses to
/// n tau / (1 + tau) with tau = (1/n) sum d/(z - d) over inliers, so each
/// evaluation costs O(n + s^3).
class ReducedOutlierFunction {
 public:
  ReducedOutlierFunction(std::vector<cplx> inliers, std::vector<cplx> outliers);

  std::size_t n() const noexcept { return inliers_.size() + outliers_.size(); }
  std::size_t s() const noexcept { return outliers_.size(); }
  const std::vector<cplx>& inliers() const noexcept { return inliers_; }
  const std::vector<cplx>& outliers() const noexcept { return outliers_; }

  /// Throws NearSingularError when |1 + tau(z)| < 1e-12 and PoleError at an
  /// inlier root.
  cplx operator()(cplx z) const;

  /// prod_in (z - d) (1 + tau(z)) f(z), which equals z p'(z) / n.
  cplx full_product(cplx z) const;

  /// Zeros found by simultaneous Newton iteration (Aberth corrections)
  /// started at the outlier roots. Throws ConvergenceError after 200 sweeps.
  std::vector<cplx> zeros() const;

 private:
  cplx tau(cplx z) const;

  std::vector<cplx> inliers_;
  std::vector<cplx> outliers_;
};

}  // namespace critpair
