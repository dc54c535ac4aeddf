#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "critpair/errors.hpp"

namespace critpair {

class Measure;

/// Closed planar set with a membership test and a nearest-point query.
class Region {
 public:
  virtual ~Region() = default;
  virtual bool contains(cplx z) const = 0;
  /// A closest point of the region to z; nullopt for an empty region.
  virtual std::optional<cplx> nearest(cplx z) const = 0;
};

using RegionPtr = std::shared_ptr<const Region>;

RegionPtr disk_region(cplx center, double radius);
/// Closed annulus inner <= |z - center| <= outer.
RegionPtr annulus_region(cplx center, double inner, double outer);
RegionPtr circle_region(cplx center, double radius);
RegionPtr point_region(cplx point);
/// Closed simple polygon.
RegionPtr polygon_region(std::vector<cplx> polygon);
RegionPtr union_region(std::vector<RegionPtr> parts);

struct OpenAnnulus {
  cplx center;
  double inner;  // may be <= 0, in which case the whole open disk is removed
  double outer;
};

/// {|z - center| <= radius} minus a union of open annuli.
RegionPtr disk_minus_annuli(cplx center, double radius, std::vector<OpenAnnulus> holes);

/// Region given by a predicate inside |z| <= bound. Nearest points come from
/// a sample grid of spacing `resolution`, so they are exact only up to it.
RegionPtr predicate_region(std::function<bool(cplx)> contains, double bound, double resolution);

/// {|z| <= bound} \ S_mu(eps): exact for circle, two-circle, disk, atomic and
/// point measures; predicate-based for polygons.
RegionPtr outside_support_region(const Measure& mu, double bound, double eps);

struct Net {
  std::vector<cplx> points;
  /// The eps/2-separated lattice points whose eps/2-ball met the domain.
  std::vector<cplx> anchors;
  double epsilon = 0.0;
  double bound = 0.0;

  /// (1 + 4M/eps)^2.
  double cardinality_bound() const;
};

/// Two-phase construction: square lattice of spacing eps/sqrt(2) on the disk
/// |z| <= M + eps/2 in spiral order (pairwise distance >= eps/2, every point of
/// the plane within eps/2 of it), then for each lattice point the nearest
/// domain point if it is within eps/2. Covering radius is at most eps.
Net build_net(const Region& domain, double bound, double epsilon);

/// Nearest-point lookup over a fixed point set, bucketed by `cell`.
class PointIndex {
 public:
  PointIndex(const std::vector<cplx>& points, double cell);
  /// Distance to the nearest point, or +inf when none lies within `reach`.
  double nearest_distance(cplx z, double reach) const;

 private:
  double cell_;
  std::vector<cplx> points_;
  std::vector<std::vector<std::size_t>> buckets_;
  long long x0_ = 0, y0_ = 0, nx_ = 0, ny_ = 0;
};

/// Largest distance from a probe of the domain to the net. Probes are the
/// grid points of spacing `pitch` inside the domain plus `boundary_probes`.
double covering_radius(const Net& net, const Region& domain, double bound, double pitch,
                       const std::vector<cplx>& boundary_probes = {});

}  // namespace critpair
