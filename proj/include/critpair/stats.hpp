#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "critpair/errors.hpp"
#include "critpair/measure.hpp"
#include "critpair/nets.hpp"
#include "critpair/polyroots.hpp"

namespace critpair {

/// Uniform probability measure on a non-empty list of atoms (repeats allowed,
/// so multiplicities carry over).
class EmpiricalMeasure {
 public:
  /// Throws std::invalid_argument for an empty list.
  explicit EmpiricalMeasure(std::vector<cplx> atoms);

  static EmpiricalMeasure of_roots(const RootedPolynomial& poly) { return EmpiricalMeasure(poly.roots()); }
  static EmpiricalMeasure of_critical_points(const CriticalPointSet& set) {
    return EmpiricalMeasure(set.expanded());
  }

  const std::vector<cplx>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  double weight() const noexcept { return 1.0 / static_cast<double>(atoms_.size()); }

 private:
  std::vector<cplx> atoms_;
};

/// Seed of the fixed discretization used when a distance involves a Measure.
constexpr std::uint64_t kReferenceSeed = 0x6372697470616972ULL;
constexpr std::size_t kReferenceSamples = 10000;

/// kReferenceSamples draws from mu with an Rng seeded by kReferenceSeed.
EmpiricalMeasure reference_discretization(const Measure& mu);

/// Wasserstein-1 distance with ground cost min(|x - y|, 1), solved exactly
/// by network simplex after merging coincident atoms. Exactly symmetric.
double bl_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b);
double bl_distance(const EmpiricalMeasure& a, const Measure& b);

/// (1/n) sum 1/(z - x_j). Throws PoleError when z is within 1e-14 (1 + |z|)
/// of an atom and std::invalid_argument for an empty list.
cplx empirical_stieltjes(std::span<const cplx> roots, cplx z);

/// Sup of |m_n - m_mu| over a net, for every (n, seed) cell. sup_errors[i][s]
/// belongs to n_values[i] and seed index s.
struct ConcentrationSweep {
  std::vector<std::size_t> n_values;
  std::size_t seeds = 0;
  std::vector<std::vector<double>> sup_errors;
  Net net;
  double bound = 0.0;
  double epsilon = 0.0;

  /// Median over seeds, one per n.
  std::vector<double> medians() const;
};

/// Net of spacing eps/10 on {|z| <= bound} \ S_mu(eps); n iid samples of mu
/// per cell, drawn from derive_seed(base_seed, n, seed). Throws
/// std::invalid_argument when bound does not exceed the support bound or the
/// region is empty.
ConcentrationSweep concentration_sweep(const Measure& mu, double bound, double epsilon,
                                       std::vector<std::size_t> n_values, std::size_t seeds,
                                       std::uint64_t base_seed = 1);

/// Bump exp(-1 / (1 - |z|^2 / r^2)) on |z| < r, zero outside.
double bump(cplx z, double r);

/// Midpoint rule for (1/n) ∫ log|L_n| φ dλ with φ = bump(·, r) on square
/// cells of side `pitch` centred on the lattice pitch·(i + 1/2, j + 1/2).
/// Cells whose centre is within 1e-9 of a root or critical point are
/// skipped. Requires 0 < pitch <= r / 50.
double log_Ln_integral(const RootedPolynomial& poly, double r, double pitch);

/// Least-squares slope of log y against log x. Needs two distinct x values
/// and positive data.
double loglog_slope(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> values);

}  // namespace critpair
