#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "critpair/errors.hpp"
#include "critpair/rng.hpp"

namespace critpair {

enum class MeasureKind { UniformCircle, TwoCircles, UniformDisk, UniformRegion, Atomic, Degenerate };

struct Atom {
  cplx point;
  double weight;
};

/// Compactly supported probability measure on the plane. Immutable once built.
class Measure {
 public:
  static Measure uniform_circle(cplx center, double radius);
  /// Unit circles centred at center - 5/2 and center + 5/2, each with mass 1/2.
  static Measure two_circles(cplx center = {0.0, 0.0});
  static Measure uniform_disk(cplx center, double radius);
  /// Uniform (area) measure on a simple polygon; vertices are stored
  /// counter-clockwise whatever the input order.
  static Measure uniform_region(std::vector<cplx> polygon);
  /// Weights must be in (0, 1] and sum to 1 within 1e-12.
  static Measure atomic(std::vector<Atom> atoms);
  static Measure degenerate(cplx point);

  MeasureKind kind() const noexcept { return kind_; }
  cplx center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  const std::vector<cplx>& polygon() const noexcept { return polygon_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

  /// Radius of an origin-centred disk containing the support.
  double support_bound() const noexcept { return bound_; }

  std::vector<cplx> sample(std::size_t count, Rng& rng) const;

  double support_distance(cplx z) const;

  /// Cauchy-Stieltjes transform. Throws DomainError within 1e-9 of the support.
  cplx stieltjes(cplx z) const;
  cplx stieltjes_derivative(cplx z) const;

  /// Distance from z to the convex hull of the support (0 inside).
  double hull_distance(cplx z) const;

  /// Pushforward under z -> z + a.
  Measure translated(cplx a) const;

  std::string describe() const;

 private:
  Measure() = default;
  void compute_bound();

  MeasureKind kind_ = MeasureKind::Degenerate;
  cplx center_{};
  double radius_ = 0.0;
  std::vector<cplx> polygon_;
  std::vector<Atom> atoms_;
  double area_ = 0.0;
  std::vector<double> triangle_cdf_;
  std::vector<std::array<cplx, 3>> triangles_;
  std::vector<cplx> hull_;
  double bound_ = 0.0;
};

constexpr double kSupportTolerance = 1e-9;

/// Adaptive triangle quadrature of the region transform, for cross-checking
/// the closed form. `rtol` is a relative tolerance on the result.
cplx region_stieltjes_quadrature(const std::vector<cplx>& polygon, cplx z, double rtol = 1e-8);

/// Star-shaped polygon r(t) = 0.65 + 0.12 cos 3t + 0.07 sin(2t + 0.5) with
/// `vertices` equally spaced angles; the stand-in for the irregular region
/// of the blob figure.
std::vector<cplx> blob_polygon(int vertices = 64);

enum class ZeroSetKind { Empty, Points, OpenDisk, Unknown };

struct ZeroSet {
  ZeroSetKind kind = ZeroSetKind::Empty;
  std::vector<cplx> points;
  cplx disk_center{};
  double disk_radius = 0.0;
  /// Numerically located (region measures); points have |m| < 1e-10.
  bool approximate = false;

  double distance(cplx z) const;
};

/// Zeros of the transform off the support. `pitch` is the search grid
/// spacing for region measures and is ignored otherwise.
ZeroSet zero_set(const Measure& mu, double pitch = 0.025);

/// Cached support and zero-set geometry for repeated membership tests.
class Neighborhood {
 public:
  explicit Neighborhood(Measure mu, double pitch = 0.025);

  const Measure& measure() const noexcept { return mu_; }
  const ZeroSet& zeros() const noexcept { return zeros_; }
  bool certified() const noexcept { return zeros_.kind != ZeroSetKind::Unknown; }

  /// dist(z, supp(mu) ∪ M_mu).
  double distance(cplx z) const;
  /// z ∈ N_mu(eps).
  bool contains(double eps, cplx z) const { return distance(z) < eps; }
  /// z ∈ S_mu(eps).
  bool support_contains(double eps, cplx z) const { return mu_.support_distance(z) < eps; }

 private:
  Measure mu_;
  ZeroSet zeros_;
};

bool in_neighborhood(const Measure& mu, double eps, cplx z);
bool in_support_neighborhood(const Measure& mu, double eps, cplx z);

/// Every zero (and a dense sample of a zero disk) lies in the convex hull of
/// the support, within 1e-9.
bool mu_zero_subset_hull_check(const Measure& mu);

}  // namespace critpair
