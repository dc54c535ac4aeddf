#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "critpair/errors.hpp"

namespace critpair {

/// Monic polynomial held as its root multiset: iid random roots followed by
/// deterministic roots. Coefficients are never formed.
struct RootedPolynomial {
  std::vector<cplx> random_roots;
  std::vector<cplx> deterministic_roots;

  std::size_t degree() const noexcept { return random_roots.size() + deterministic_roots.size(); }

  /// Random roots first, then deterministic ones.
  std::vector<cplx> roots() const;
};

/// Throws std::invalid_argument when the total degree is zero.
RootedPolynomial make_polynomial(std::vector<cplx> random_roots,
                                 std::vector<cplx> deterministic_roots = {});

enum class Solver { Aberth, CompanionOracle };

struct CriticalPoint {
  cplx location;
  int multiplicity = 1;
  /// |L_n(w)| times the distance from w to the nearest root; 0 at repeated roots.
  double residual = 0.0;
};

struct CriticalPointSet {
  std::vector<CriticalPoint> points;
  Solver solver = Solver::Aberth;

  std::size_t total_multiplicity() const noexcept;
  /// Locations repeated according to multiplicity.
  std::vector<cplx> expanded() const;
};

/// L_n(z) = p'(z)/p(z) = sum_j 1/(z - root_j). Throws PoleError when z is
/// within 1e-14 (1 + |z|) of a root.
cplx log_derivative(const RootedPolynomial& poly, cplx z);

/// All n-1 critical points with multiplicity.
///
/// Exactly repeated roots (bitwise or within 1e-12 relative) are clustered; a
/// root of multiplicity m is a critical point of multiplicity m-1. The
/// remaining critical points are the zeros of the weighted log-derivative over
/// the distinct roots, found by Aberth-Ehrlich iteration. A group of iterates
/// that the data cannot separate (overlapping inclusion disks) is replaced by
/// its centroid with the group size as multiplicity, but only when a contour
/// integral of L'/L confirms the zero count around it.
///
/// `tol` must lie in [1e-14, 1e-6]; throws std::invalid_argument otherwise and
/// ConvergenceError when neither the root-adjacent nor the circular start
/// converges within 500 sweeps.
CriticalPointSet critical_points(const RootedPolynomial& poly, double tol = 1e-12);

/// Shift every root by `a`; the critical points shift by `a` as well.
RootedPolynomial translate(const RootedPolynomial& poly, cplx a);

/// Distinct values of `values` with their multiplicities, using the
/// repeated-root rule of critical_points. Output is sorted lexicographically.
struct RootClusters {
  std::vector<cplx> centers;
  std::vector<int> multiplicity;
};
RootClusters cluster_roots(std::span<const cplx> values);

/// Zeros of sum_i w_i / (z - c_i) for distinct centers and positive weights.
/// There are exactly centers.size() - 1 of them counted with multiplicity.
struct WeightedZeros {
  std::vector<cplx> zeros;
  std::vector<int> multiplicity;
  std::vector<double> residuals;
};
WeightedZeros weighted_log_derivative_zeros(std::span<const cplx> centers,
                                            std::span<const double> weights, double tol);

}  // namespace critpair
