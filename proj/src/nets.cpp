#include "critpair/nets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>
#include <utility>

#include "critpair/geometry.hpp"
#include "critpair/measure.hpp"

namespace critpair {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed sets accept points this far (relative) outside, so that projected
// boundary points test as members despite rounding.
constexpr double kBoundarySlack = 1e-12;

double slack_at(cplx z) { return kBoundarySlack * (1.0 + std::abs(z)); }

cplx project_to_circle(cplx z, cplx c, double r) {
  const cplx d = z - c;
  const double len = std::abs(d);
  if (len == 0.0) return c + r;
  return c + d * (r / len);
}

class DiskRegion final : public Region {
 public:
  DiskRegion(cplx c, double r) : c_(c), r_(r) {}
  bool contains(cplx z) const override { return std::abs(z - c_) <= r_ + slack_at(z); }
  std::optional<cplx> nearest(cplx z) const override {
    return contains(z) ? z : project_to_circle(z, c_, r_);
  }

 private:
  cplx c_;
  double r_;
};

class AnnulusRegion final : public Region {
 public:
  AnnulusRegion(cplx c, double inner, double outer) : c_(c), inner_(inner), outer_(outer) {}
  bool contains(cplx z) const override {
    const double d = std::abs(z - c_);
    return d >= inner_ - slack_at(z) && d <= outer_ + slack_at(z);
  }
  std::optional<cplx> nearest(cplx z) const override {
    if (contains(z)) return z;
    const double d = std::abs(z - c_);
    return project_to_circle(z, c_, std::clamp(d, inner_, outer_));
  }

 private:
  cplx c_;
  double inner_, outer_;
};

class PointRegion final : public Region {
 public:
  explicit PointRegion(cplx p) : p_(p) {}
  bool contains(cplx z) const override { return z == p_; }
  std::optional<cplx> nearest(cplx) const override { return p_; }

 private:
  cplx p_;
};

class PolygonRegion final : public Region {
 public:
  explicit PolygonRegion(std::vector<cplx> poly) : poly_(std::move(poly)) {}
  bool contains(cplx z) const override { return point_in_polygon(poly_, z); }
  std::optional<cplx> nearest(cplx z) const override {
    return contains(z) ? z : boundary_nearest(poly_, z);
  }

 private:
  std::vector<cplx> poly_;
};

class UnionRegion final : public Region {
 public:
  explicit UnionRegion(std::vector<RegionPtr> parts) : parts_(std::move(parts)) {}
  bool contains(cplx z) const override {
    return std::any_of(parts_.begin(), parts_.end(), [&](const RegionPtr& p) { return p->contains(z); });
  }
  std::optional<cplx> nearest(cplx z) const override {
    std::optional<cplx> best;
    double best_d = kInf;
    for (const auto& p : parts_) {
      const auto q = p->nearest(z);
      if (q && std::abs(*q - z) < best_d) {
        best_d = std::abs(*q - z);
        best = q;
      }
    }
    return best;
  }

 private:
  std::vector<RegionPtr> parts_;
};

struct Circle {
  cplx c;
  double r;
};

void circle_intersections(const Circle& a, const Circle& b, std::vector<cplx>& out) {
  const cplx d = b.c - a.c;
  const double dist = std::abs(d);
  if (dist == 0.0 || dist > a.r + b.r || dist < std::abs(a.r - b.r)) return;
  const double along = (a.r * a.r - b.r * b.r + dist * dist) / (2.0 * dist);
  const double h = std::sqrt(std::max(0.0, a.r * a.r - along * along));
  const cplx e = d / dist;
  const cplx base = a.c + along * e;
  out.push_back(base + h * cplx{-e.imag(), e.real()});
  out.push_back(base - h * cplx{-e.imag(), e.real()});
}

class DiskMinusAnnuli final : public Region {
 public:
  DiskMinusAnnuli(cplx c, double r, std::vector<OpenAnnulus> holes) : c_(c), r_(r), holes_(std::move(holes)) {
    circles_.push_back({c_, r_});
    for (const auto& h : holes_) {
      if (h.inner > 0.0) circles_.push_back({h.center, h.inner});
      circles_.push_back({h.center, h.outer});
    }
    for (std::size_t i = 0; i < circles_.size(); ++i)
      for (std::size_t j = i + 1; j < circles_.size(); ++j) circle_intersections(circles_[i], circles_[j], corners_);
  }

  bool contains(cplx z) const override { return contains_with_slack(z, kBoundarySlack); }

  std::optional<cplx> nearest(cplx z) const override {
    if (contains(z)) return z;
    std::vector<cplx> candidates = corners_;
    for (const Circle& k : circles_) {
      if (z == k.c) {
        for (int a = 0; a < 16; ++a) candidates.push_back(k.c + k.r * std::polar(1.0, std::numbers::pi * a / 8.0));
      } else {
        candidates.push_back(project_to_circle(z, k.c, k.r));
      }
    }
    std::optional<cplx> best;
    double best_d = kInf;
    for (const cplx& q : candidates) {
      const double d = std::abs(q - z);
      if (d < best_d && contains_with_slack(q, kBoundarySlack)) {
        best_d = d;
        best = q;
      }
    }
    return best;
  }

 private:
  bool contains_with_slack(cplx z, double rel) const {
    const double slack = rel * (1.0 + std::abs(z));
    if (std::abs(z - c_) > r_ + slack) return false;
    for (const auto& h : holes_) {
      const double d = std::abs(z - h.center);
      if (d > h.inner + slack && d < h.outer - slack) return false;
    }
    return true;
  }

  cplx c_;
  double r_;
  std::vector<OpenAnnulus> holes_;
  std::vector<Circle> circles_;
  std::vector<cplx> corners_;
};

class PredicateRegion final : public Region {
 public:
  PredicateRegion(std::function<bool(cplx)> pred, double bound, double resolution)
      : pred_(std::move(pred)), bound_(bound), res_(resolution) {
    if (!(resolution > 0.0)) throw std::invalid_argument("predicate_region: resolution must be positive");
  }

  bool contains(cplx z) const override { return std::abs(z) <= bound_ && pred_(z); }

  std::optional<cplx> nearest(cplx z) const override {
    if (contains(z)) return z;
    const long long ci = std::llround(z.real() / res_), cj = std::llround(z.imag() / res_);
    const long long max_ring = static_cast<long long>(std::ceil((2.0 * bound_ + std::abs(z)) / res_)) + 1;
    std::optional<cplx> best;
    double best_d = kInf;
    for (long long ring = 0; ring <= max_ring; ++ring) {
      // The ring at Chebyshev index `ring` is at least (ring - 1) * res away.
      if (best && best_d <= (static_cast<double>(ring) - 1.0) * res_) break;
      for (long long i = ci - ring; i <= ci + ring; ++i) {
        for (long long j = cj - ring; j <= cj + ring; ++j) {
          if (std::max(std::llabs(i - ci), std::llabs(j - cj)) != ring) continue;
          const cplx q{static_cast<double>(i) * res_, static_cast<double>(j) * res_};
          const double d = std::abs(q - z);
          if (d < best_d && contains(q)) {
            best_d = d;
            best = q;
          }
        }
      }
    }
    return best;
  }

 private:
  std::function<bool(cplx)> pred_;
  double bound_, res_;
};

}  // namespace

RegionPtr disk_region(cplx center, double radius) { return std::make_shared<DiskRegion>(center, radius); }
RegionPtr annulus_region(cplx center, double inner, double outer) {
  if (inner > outer) throw std::invalid_argument("annulus_region: inner radius exceeds outer radius");
  return std::make_shared<AnnulusRegion>(center, inner, outer);
}
RegionPtr circle_region(cplx center, double radius) { return std::make_shared<AnnulusRegion>(center, radius, radius); }
RegionPtr point_region(cplx point) { return std::make_shared<PointRegion>(point); }
RegionPtr polygon_region(std::vector<cplx> polygon) { return std::make_shared<PolygonRegion>(std::move(polygon)); }
RegionPtr union_region(std::vector<RegionPtr> parts) { return std::make_shared<UnionRegion>(std::move(parts)); }
RegionPtr disk_minus_annuli(cplx center, double radius, std::vector<OpenAnnulus> holes) {
  return std::make_shared<DiskMinusAnnuli>(center, radius, std::move(holes));
}
RegionPtr predicate_region(std::function<bool(cplx)> contains, double bound, double resolution) {
  return std::make_shared<PredicateRegion>(std::move(contains), bound, resolution);
}

RegionPtr outside_support_region(const Measure& mu, double bound, double eps) {
  std::vector<OpenAnnulus> holes;
  switch (mu.kind()) {
    case MeasureKind::UniformCircle:
      holes.push_back({mu.center(), mu.radius() - eps, mu.radius() + eps});
      break;
    case MeasureKind::TwoCircles:
      holes.push_back({mu.center() - 2.5, 1.0 - eps, 1.0 + eps});
      holes.push_back({mu.center() + 2.5, 1.0 - eps, 1.0 + eps});
      break;
    case MeasureKind::UniformDisk:
      holes.push_back({mu.center(), -1.0, mu.radius() + eps});
      break;
    case MeasureKind::Degenerate:
      holes.push_back({mu.center(), -1.0, eps});
      break;
    case MeasureKind::Atomic:
      for (const Atom& a : mu.atoms()) holes.push_back({a.point, -1.0, eps});
      break;
    case MeasureKind::UniformRegion: {
      const Measure copy = mu;
      return predicate_region([copy, eps](cplx z) { return copy.support_distance(z) >= eps; }, bound, eps / 20.0);
    }
  }
  return disk_minus_annuli({0.0, 0.0}, bound, std::move(holes));
}

double Net::cardinality_bound() const {
  const double t = 1.0 + 4.0 * bound / epsilon;
  return t * t;
}

Net build_net(const Region& domain, double bound, double epsilon) {
  if (!(bound > 0.0) || !(epsilon > 0.0)) throw std::invalid_argument("build_net: bound and epsilon must be positive");
  Net net;
  net.epsilon = epsilon;
  net.bound = bound;

  const double pitch = epsilon / std::numbers::sqrt2;
  const double reach = bound + 0.5 * epsilon;
  const long long k = static_cast<long long>(std::ceil(reach / pitch));
  struct Site {
    long long ring;
    double angle;
    cplx z;
  };
  std::vector<Site> sites;
  for (long long i = -k; i <= k; ++i) {
    for (long long j = -k; j <= k; ++j) {
      const cplx z{static_cast<double>(i) * pitch, static_cast<double>(j) * pitch};
      if (std::abs(z) > reach) continue;
      sites.push_back({std::max(std::llabs(i), std::llabs(j)), std::atan2(static_cast<double>(j), static_cast<double>(i)), z});
    }
  }
  std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
    return a.ring < b.ring || (a.ring == b.ring && a.angle < b.angle);
  });

  std::set<std::pair<double, double>> seen;
  const double half = 0.5 * epsilon;
  for (const Site& s : sites) {
    const auto y = domain.nearest(s.z);
    if (!y || std::abs(*y - s.z) > half) continue;
    net.anchors.push_back(s.z);
    if (seen.insert({y->real(), y->imag()}).second) net.points.push_back(*y);
  }
  return net;
}

PointIndex::PointIndex(const std::vector<cplx>& points, double cell) : cell_(cell), points_(points) {
  if (!(cell > 0.0)) throw std::invalid_argument("PointIndex: cell must be positive");
  if (points_.empty()) return;
  long long xmin = std::numeric_limits<long long>::max(), ymin = xmin, xmax = std::numeric_limits<long long>::min(), ymax = xmax;
  for (const cplx& p : points_) {
    const long long x = static_cast<long long>(std::floor(p.real() / cell_));
    const long long y = static_cast<long long>(std::floor(p.imag() / cell_));
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  x0_ = xmin;
  y0_ = ymin;
  nx_ = xmax - xmin + 1;
  ny_ = ymax - ymin + 1;
  buckets_.resize(static_cast<std::size_t>(nx_ * ny_));
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const long long x = static_cast<long long>(std::floor(points_[i].real() / cell_)) - x0_;
    const long long y = static_cast<long long>(std::floor(points_[i].imag() / cell_)) - y0_;
    buckets_[static_cast<std::size_t>(x * ny_ + y)].push_back(i);
  }
}

double PointIndex::nearest_distance(cplx z, double reach) const {
  if (points_.empty()) return kInf;
  const long long cx = static_cast<long long>(std::floor(z.real() / cell_)) - x0_;
  const long long cy = static_cast<long long>(std::floor(z.imag() / cell_)) - y0_;
  const long long rings = static_cast<long long>(std::ceil(reach / cell_)) + 1;
  double best = kInf;
  for (long long ring = 0; ring <= rings; ++ring) {
    if (best <= (static_cast<double>(ring) - 1.0) * cell_) break;
    for (long long x = cx - ring; x <= cx + ring; ++x) {
      if (x < 0 || x >= nx_) continue;
      for (long long y = cy - ring; y <= cy + ring; ++y) {
        if (y < 0 || y >= ny_) continue;
        if (std::max(std::llabs(x - cx), std::llabs(y - cy)) != ring) continue;
        for (std::size_t idx : buckets_[static_cast<std::size_t>(x * ny_ + y)])
          best = std::min(best, std::abs(points_[idx] - z));
      }
    }
  }
  return best <= reach ? best : kInf;
}

double covering_radius(const Net& net, const Region& domain, double bound, double pitch,
                       const std::vector<cplx>& boundary_probes) {
  const PointIndex index(net.points, net.epsilon);
  const double reach = 4.0 * bound + 4.0 * net.epsilon;
  double worst = 0.0;
  auto probe = [&](cplx z) { worst = std::max(worst, index.nearest_distance(z, reach)); };
  const long long k = static_cast<long long>(std::ceil(bound / pitch));
  for (long long i = -k; i <= k; ++i) {
    for (long long j = -k; j <= k; ++j) {
      const cplx z{static_cast<double>(i) * pitch, static_cast<double>(j) * pitch};
      if (std::abs(z) <= bound && domain.contains(z)) probe(z);
    }
  }
  for (const cplx& z : boundary_probes) probe(z);
  return worst;
}

}  // namespace critpair
