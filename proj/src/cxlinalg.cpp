#include "critpair/cxlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace critpair {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> entries) {
  ComplexMatrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

std::vector<cplx> ComplexMatrix::apply(std::span<const cplx> x) const {
  if (x.size() != cols_) throw std::invalid_argument("apply: dimension mismatch");
  std::vector<cplx> y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum: dimension mismatch");
  ComplexMatrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
  return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix difference: dimension mismatch");
  ComplexMatrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
  return out;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
  ComplexMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

ComplexMatrix operator*(cplx s, const ComplexMatrix& a) {
  ComplexMatrix out = a;
  for (cplx& x : out.data_) x *= s;
  return out;
}

namespace {

void require_square(const ComplexMatrix& a, const char* who) {
  if (a.rows() != a.cols()) throw std::invalid_argument(std::string(who) + ": matrix must be square");
}

struct LU {
  ComplexMatrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  bool singular = false;
};

LU factor(const ComplexMatrix& a) {
  LU f{a, {}, 1, false};
  const std::size_t n = a.rows();
  f.perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
  ComplexMatrix& m = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(m(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(m(i, k)) > best) {
        best = std::abs(m(i, k));
        p = i;
      }
    }
    if (best == 0.0) {
      f.singular = true;
      continue;
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      std::swap(f.perm[k], f.perm[p]);
      f.sign = -f.sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx l = m(i, k) / m(k, k);
      m(i, k) = l;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
    }
  }
  return f;
}

}  // namespace

cplx determinant(const ComplexMatrix& a) {
  require_square(a, "determinant");
  const LU f = factor(a);
  if (f.singular) return {0.0, 0.0};
  cplx det = static_cast<double>(f.sign);
  for (std::size_t i = 0; i < a.rows(); ++i) det *= f.lu(i, i);
  return det;
}

ComplexMatrix inverse(const ComplexMatrix& a) {
  require_square(a, "inverse");
  const LU f = factor(a);
  if (f.singular) throw SingularError("inverse: matrix is singular");
  const std::size_t n = a.rows();
  ComplexMatrix inv(n, n);
  std::vector<cplx> x(n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) x[i] = f.perm[i] == col ? 1.0 : 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
      x[i] /= f.lu(i, i);
    }
    for (std::size_t i = 0; i < n; ++i) inv(i, col) = x[i];
  }
  return inv;
}

double spectral_norm(const ComplexMatrix& a) {
  const std::size_t n = a.cols();
  if (n == 0 || a.rows() == 0) return 0.0;
  const ComplexMatrix ah = a.adjoint();
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = cplx{1.0 + 0.1 * static_cast<double>(i), 0.03 * static_cast<double>(i % 7)};
  double estimate = 0.0;
  for (int it = 0; it < 20000; ++it) {
    double len = 0.0;
    for (const cplx& v : x) len += std::norm(v);
    len = std::sqrt(len);
    if (len == 0.0) return 0.0;
    for (cplx& v : x) v /= len;
    const std::vector<cplx> y = ah.apply(a.apply(x));
    double ylen = 0.0;
    for (const cplx& v : y) ylen += std::norm(v);
    const double next = std::sqrt(std::sqrt(ylen));
    x = y;
    // Rayleigh-type estimate increases monotonically towards sigma_max.
    if (it > 2 && std::abs(next - estimate) <= 1e-9 * next) return next;
    estimate = next;
  }
  return estimate;
}

ComplexMatrix companion_matrix(std::span<const cplx> roots) {
  const std::size_t n = roots.size();
  if (n == 0) throw std::invalid_argument("companion_matrix: no roots");
  ComplexMatrix m(n, n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = roots[i] * ((i == j ? 1.0 : 0.0) - inv_n);
  return m;
}

namespace {

void reduce_to_hessenberg(ComplexMatrix& h) {
  const std::size_t n = h.rows();
  std::vector<cplx> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double alpha2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) alpha2 += std::norm(h(i, k));
    const double alpha = std::sqrt(alpha2);
    if (alpha == 0.0) continue;
    const cplx x0 = h(k + 1, k);
    const cplx phase = std::abs(x0) == 0.0 ? cplx{1.0, 0.0} : x0 / std::abs(x0);
    std::fill(v.begin(), v.end(), cplx{0.0, 0.0});
    for (std::size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
    v[k + 1] += phase * alpha;
    double vlen2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vlen2 += std::norm(v[i]);
    if (vlen2 == 0.0) continue;
    // H <- (I - 2 v v^H / |v|^2) H (I - 2 v v^H / |v|^2)
    for (std::size_t j = 0; j < n; ++j) {
      cplx dot{0.0, 0.0};
      for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i]) * h(i, j);
      dot *= 2.0 / vlen2;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= v[i] * dot;
    }
    for (std::size_t i = 0; i < n; ++i) {
      cplx dot{0.0, 0.0};
      for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * v[j];
      dot *= 2.0 / vlen2;
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= dot * std::conj(v[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

/// Eigenvalue of [[a, b], [c, d]] closest to d.
cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
  const cplx half_tr = 0.5 * (a + d);
  const cplx disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  const cplx l1 = half_tr + disc, l2 = half_tr - disc;
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

}  // namespace

std::vector<cplx> eigenvalues(const ComplexMatrix& m, double tol) {
  require_square(m, "eigenvalues");
  const std::size_t n = m.rows();
  std::vector<cplx> out;
  if (n == 0) return out;
  ComplexMatrix h = m;
  reduce_to_hessenberg(h);

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(h(i, j)));
  const double floor = std::max(tol, std::numeric_limits<double>::epsilon()) * std::max(scale, 1e-300);
  const double eps = std::max(tol, std::numeric_limits<double>::epsilon());

  const std::size_t max_sweeps = 100 * n;
  std::size_t sweeps = 0;
  int since_deflation = 0;
  std::size_t hi = n - 1;
  while (true) {
    if (hi == 0) {
      out.push_back(h(0, 0));
      break;
    }
    std::size_t lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      const double local = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
      if (sub <= eps * local || sub <= floor) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      out.push_back(h(hi, hi));
      --hi;
      since_deflation = 0;
      continue;
    }
    if (++sweeps > max_sweeps) {
      std::vector<cplx> rest;
      std::vector<double> res;
      for (std::size_t i = 0; i <= hi; ++i) {
        rest.push_back(h(i, i));
        res.push_back(i > 0 ? std::abs(h(i, i - 1)) : 0.0);
      }
      throw ConvergenceError("eigenvalues: QR iteration did not converge", std::move(rest), std::move(res));
    }
    ++since_deflation;
    cplx mu;
    if (since_deflation % 11 == 10) {
      // Exceptional shift to break cycles.
      mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1)) * cplx{1.0, 0.5};
    } else {
      mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    }

    cplx x = h(lo, lo) - mu;
    cplx y = h(lo + 1, lo);
    for (std::size_t k = lo; k < hi; ++k) {
      if (k > lo) {
        x = h(k, k - 1);
        y = h(k + 1, k - 1);
      }
      const double r = std::hypot(std::abs(x), std::abs(y));
      if (r == 0.0) continue;
      double c;
      cplx s;
      if (std::abs(x) == 0.0) {
        c = 0.0;
        s = std::conj(y) / std::abs(y);
      } else {
        c = std::abs(x) / r;
        s = (x / std::abs(x)) * std::conj(y) / r;
      }
      const std::size_t jstart = k > lo ? k - 1 : lo;
      for (std::size_t j = jstart; j <= hi; ++j) {
        const cplx a = h(k, j), b = h(k + 1, j);
        h(k, j) = c * a + s * b;
        h(k + 1, j) = -std::conj(s) * a + c * b;
      }
      if (k > lo) h(k + 1, k - 1) = 0.0;
      const std::size_t iend = std::min(k + 2, hi);
      for (std::size_t i = lo; i <= iend; ++i) {
        const cplx a = h(i, k), b = h(i, k + 1);
        h(i, k) = a * c + b * std::conj(s);
        h(i, k + 1) = -a * s + b * c;
      }
    }
  }
  return out;
}

double companion_identity_residual(std::span<const cplx> roots, cplx z) {
  const std::size_t n = roots.size();
  if (n == 0) throw std::invalid_argument("companion_identity_residual: no roots");
  ComplexMatrix a = ComplexMatrix::identity(n);
  a = z * a - companion_matrix(roots);
  const cplx det = determinant(a);

  cplx dp{0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    cplx term{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i)
      if (i != j) term *= z - roots[i];
    dp += term;
  }
  const cplx rhs = z * dp / static_cast<double>(n);
  return std::abs(det - rhs) / (1.0 + std::abs(rhs));
}

double sherman_morrison_check(const ComplexMatrix& a, std::span<const cplx> u, std::span<const cplx> v) {
  require_square(a, "sherman_morrison_check");
  const std::size_t n = a.rows();
  if (u.size() != n || v.size() != n) throw std::invalid_argument("sherman_morrison_check: dimension mismatch");
  const ComplexMatrix ainv = inverse(a);
  const std::vector<cplx> ainv_u = ainv.apply(u);
  std::vector<cplx> vt_ainv(n, cplx{0.0, 0.0});
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) vt_ainv[j] += v[i] * ainv(i, j);
  cplx denom{1.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) denom += v[i] * ainv_u[i];
  if (std::abs(denom) < 1e-12) throw SingularError("sherman_morrison_check: 1 + v^T A^{-1} u vanishes");

  ComplexMatrix updated = a;
  ComplexMatrix formula = ainv;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      updated(i, j) += u[i] * v[j];
      formula(i, j) -= ainv_u[i] * vt_ainv[j] / denom;
    }
  return spectral_norm(updated * formula - ComplexMatrix::identity(n));
}

double block_determinant_check(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                               const ComplexMatrix& d) {
  require_square(a, "block_determinant_check");
  require_square(d, "block_determinant_check");
  const std::size_t p = a.rows(), q = d.rows();
  if (b.rows() != p || b.cols() != q || c.rows() != q || c.cols() != p)
    throw std::invalid_argument("block_determinant_check: block dimensions mismatch");
  ComplexMatrix full(p + q, p + q);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) full(i, j) = a(i, j);
    for (std::size_t j = 0; j < q; ++j) full(i, p + j) = b(i, j);
  }
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < p; ++j) full(p + i, j) = c(i, j);
    for (std::size_t j = 0; j < q; ++j) full(p + i, p + j) = d(i, j);
  }
  const cplx lhs = determinant(full);
  const cplx rhs = determinant(a) * determinant(d - c * inverse(a) * b);
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

DetDifference det_difference_bound_check(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "det_difference_bound_check");
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("det_difference_bound_check: dimension mismatch");
  return {std::abs(determinant(a) - determinant(b)), spectral_norm(a - b)};
}

double det_difference_constant(std::size_t k) {
  return static_cast<double>(k) * std::pow(10.0, static_cast<double>(k) - 1.0);
}

ReducedOutlierFunction::ReducedOutlierFunction(std::vector<cplx> inliers, std::vector<cplx> outliers)
    : inliers_(std::move(inliers)), outliers_(std::move(outliers)) {
  if (outliers_.empty()) throw std::invalid_argument("ReducedOutlierFunction: need at least one outlier");
}

cplx ReducedOutlierFunction::tau(cplx z) const {
  cplx sum{0.0, 0.0};
  for (const cplx& d : inliers_) {
    if (z == d) throw PoleError("ReducedOutlierFunction: z is an inlier root");
    sum += d / (z - d);
  }
  return sum / static_cast<double>(n());
}

cplx ReducedOutlierFunction::operator()(cplx z) const {
  const cplx t = tau(z);
  const cplx denom = 1.0 + t;
  if (std::abs(denom) < 1e-12) throw NearSingularError("ReducedOutlierFunction: 1 + tau(z) vanishes");
  const std::size_t s = outliers_.size();
  const cplx coupling = 1.0 / (static_cast<double>(n()) * denom);
  ComplexMatrix m(s, s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) m(i, j) = (i == j ? z - outliers_[i] : cplx{0.0, 0.0}) + coupling * outliers_[i];
  return determinant(m);
}

cplx ReducedOutlierFunction::full_product(cplx z) const {
  cplx prod{1.0, 0.0};
  for (const cplx& d : inliers_) prod *= z - d;
  return prod * (1.0 + tau(z)) * (*this)(z);
}

std::vector<cplx> ReducedOutlierFunction::zeros() const {
  std::vector<cplx> w = outliers_;
  const std::size_t s = w.size();
  // Distinct starting points even for repeated outliers.
  for (std::size_t k = 0; k < s; ++k) w[k] += 1e-6 * (1.0 + std::abs(w[k])) * std::polar(1.0, 2.399 * static_cast<double>(k));
  std::vector<bool> done(s, false);
  for (int sweep = 0; sweep < 200; ++sweep) {
    bool active = false;
    for (std::size_t k = 0; k < s; ++k) {
      if (done[k]) continue;
      const double h = 1e-7 * (1.0 + std::abs(w[k]));
      const cplx f = (*this)(w[k]);
      if (f == cplx{0.0, 0.0}) {
        done[k] = true;
        continue;
      }
      const cplx df = ((*this)(w[k] + h) - (*this)(w[k] - h)) / (2.0 * h);
      cplx repulsion{0.0, 0.0};
      for (std::size_t j = 0; j < s; ++j)
        if (j != k) repulsion += 1.0 / (w[k] - w[j]);
      const cplx step = 1.0 / (df / f - repulsion);
      w[k] -= step;
      if (std::abs(step) <= 1e-14 * (1.0 + std::abs(w[k]))) done[k] = true;
      else active = true;
    }
    if (!active) return w;
  }
  std::vector<double> res;
  for (const cplx& x : w) res.push_back(std::abs((*this)(x)));
  throw ConvergenceError("ReducedOutlierFunction: zero search did not converge", w, res);
}

}  // namespace critpair
