#include "critpair/measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "critpair/geometry.hpp"
#include "critpair/polyroots.hpp"

namespace critpair {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kHalfGap = 2.5;

cplx unit(double theta) { return {std::cos(theta), std::sin(theta)}; }

// Closed-form integrals over the polygon P of 1/(z - x) and 1/(z - x)^2 with
// respect to area. Green's theorem turns each into a boundary integral of
// conj(x) g(x) dx / 2i with g holomorphic on P, which is elementary on each
// edge.
cplx polygon_integral(const std::vector<cplx>& polygon, cplx z, bool squared) {
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const cplx a = polygon[i], b = polygon[(i + 1) % polygon.size()];
    const cplx d = b - a;
    const cplx slope = std::conj(d) / d;
    const cplx c = std::conj(a) + slope * (z - a);
    const cplx log_ratio = std::log((z - a) / (z - b));
    if (squared)
      sum += c * (1.0 / (z - b) - 1.0 / (z - a)) - slope * log_ratio;
    else
      sum += c * log_ratio - std::conj(d);
  }
  return sum / cplx{0.0, 2.0};
}

std::string fmt(cplx z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

}  // namespace

Measure Measure::uniform_circle(cplx center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("uniform_circle: radius must be positive");
  Measure m;
  m.kind_ = MeasureKind::UniformCircle;
  m.center_ = center;
  m.radius_ = radius;
  m.compute_bound();
  return m;
}

Measure Measure::two_circles(cplx center) {
  Measure m;
  m.kind_ = MeasureKind::TwoCircles;
  m.center_ = center;
  m.radius_ = 1.0;
  m.compute_bound();
  return m;
}

Measure Measure::uniform_disk(cplx center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("uniform_disk: radius must be positive");
  Measure m;
  m.kind_ = MeasureKind::UniformDisk;
  m.center_ = center;
  m.radius_ = radius;
  m.compute_bound();
  return m;
}

Measure Measure::uniform_region(std::vector<cplx> polygon) {
  if (polygon.size() < 3) throw std::invalid_argument("uniform_region: need at least 3 vertices");
  if (signed_area(polygon) < 0.0) std::reverse(polygon.begin(), polygon.end());
  Measure m;
  m.kind_ = MeasureKind::UniformRegion;
  m.area_ = signed_area(polygon);
  if (!(m.area_ > 0.0)) throw std::invalid_argument("uniform_region: polygon has zero area");
  m.triangles_ = triangulate(polygon);
  double acc = 0.0;
  for (const auto& t : m.triangles_) {
    acc += 0.5 * std::abs(cross(t[0], t[1], t[2]));
    m.triangle_cdf_.push_back(acc);
  }
  for (double& c : m.triangle_cdf_) c /= acc;
  m.hull_ = convex_hull(polygon);
  m.polygon_ = std::move(polygon);
  m.compute_bound();
  return m;
}

Measure Measure::atomic(std::vector<Atom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("atomic: no atoms");
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (!(a.weight > 0.0 && a.weight <= 1.0)) throw std::invalid_argument("atomic: weights must lie in (0, 1]");
    total += a.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("atomic: weights must sum to 1");
  Measure m;
  m.kind_ = MeasureKind::Atomic;
  std::vector<cplx> pts;
  for (const Atom& a : atoms) pts.push_back(a.point);
  m.hull_ = convex_hull(pts);
  m.atoms_ = std::move(atoms);
  m.compute_bound();
  return m;
}

Measure Measure::degenerate(cplx point) {
  Measure m;
  m.kind_ = MeasureKind::Degenerate;
  m.center_ = point;
  m.hull_ = {point};
  m.compute_bound();
  return m;
}

void Measure::compute_bound() {
  switch (kind_) {
    case MeasureKind::UniformCircle:
    case MeasureKind::UniformDisk:
      bound_ = std::abs(center_) + radius_;
      break;
    case MeasureKind::TwoCircles:
      bound_ = std::abs(center_) + kHalfGap + 1.0;
      break;
    case MeasureKind::UniformRegion:
      bound_ = 0.0;
      for (const cplx& v : polygon_) bound_ = std::max(bound_, std::abs(v));
      break;
    case MeasureKind::Atomic:
      bound_ = 0.0;
      for (const Atom& a : atoms_) bound_ = std::max(bound_, std::abs(a.point));
      break;
    case MeasureKind::Degenerate:
      bound_ = std::abs(center_);
      break;
  }
}

std::vector<cplx> Measure::sample(std::size_t count, Rng& rng) const {
  std::vector<cplx> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    switch (kind_) {
      case MeasureKind::UniformCircle:
        out.push_back(center_ + radius_ * unit(kTwoPi * rng.uniform()));
        break;
      case MeasureKind::TwoCircles: {
        const double side = rng.uniform() < 0.5 ? -kHalfGap : kHalfGap;
        out.push_back(center_ + side + unit(kTwoPi * rng.uniform()));
        break;
      }
      case MeasureKind::UniformDisk: {
        const double r = radius_ * std::sqrt(rng.uniform());
        out.push_back(center_ + r * unit(kTwoPi * rng.uniform()));
        break;
      }
      case MeasureKind::UniformRegion: {
        const double pick = rng.uniform();
        auto it = std::upper_bound(triangle_cdf_.begin(), triangle_cdf_.end(), pick);
        if (it == triangle_cdf_.end()) --it;
        const auto& t = triangles_[static_cast<std::size_t>(it - triangle_cdf_.begin())];
        double u = rng.uniform(), v = rng.uniform();
        if (u + v > 1.0) {
          u = 1.0 - u;
          v = 1.0 - v;
        }
        out.push_back(t[0] + u * (t[1] - t[0]) + v * (t[2] - t[0]));
        break;
      }
      case MeasureKind::Atomic: {
        const double pick = rng.uniform();
        double acc = 0.0;
        cplx chosen = atoms_.back().point;
        for (const Atom& a : atoms_) {
          acc += a.weight;
          if (pick < acc) {
            chosen = a.point;
            break;
          }
        }
        out.push_back(chosen);
        break;
      }
      case MeasureKind::Degenerate:
        out.push_back(center_);
        break;
    }
  }
  return out;
}

double Measure::support_distance(cplx z) const {
  switch (kind_) {
    case MeasureKind::UniformCircle:
      return std::abs(std::abs(z - center_) - radius_);
    case MeasureKind::TwoCircles:
      return std::min(std::abs(std::abs(z - center_ + kHalfGap) - 1.0), std::abs(std::abs(z - center_ - kHalfGap) - 1.0));
    case MeasureKind::UniformDisk:
      return std::max(0.0, std::abs(z - center_) - radius_);
    case MeasureKind::UniformRegion:
      return point_in_polygon(polygon_, z) ? 0.0 : boundary_distance(polygon_, z);
    case MeasureKind::Atomic: {
      double d = std::numeric_limits<double>::infinity();
      for (const Atom& a : atoms_) d = std::min(d, std::abs(z - a.point));
      return d;
    }
    case MeasureKind::Degenerate:
      return std::abs(z - center_);
  }
  return 0.0;
}

cplx Measure::stieltjes(cplx z) const {
  if (support_distance(z) <= kSupportTolerance) throw DomainError("stieltjes: point on the support");
  switch (kind_) {
    case MeasureKind::UniformCircle:
      return std::abs(z - center_) > radius_ ? 1.0 / (z - center_) : cplx{0.0, 0.0};
    case MeasureKind::TwoCircles: {
      cplx sum{0.0, 0.0};
      for (double side : {-kHalfGap, kHalfGap}) {
        const cplx w = z - center_ - side;
        if (std::abs(w) > 1.0) sum += 0.5 / w;
      }
      return sum;
    }
    case MeasureKind::UniformDisk:
      return 1.0 / (z - center_);
    case MeasureKind::UniformRegion:
      return polygon_integral(polygon_, z, false) / area_;
    case MeasureKind::Atomic: {
      cplx sum{0.0, 0.0};
      for (const Atom& a : atoms_) sum += a.weight / (z - a.point);
      return sum;
    }
    case MeasureKind::Degenerate:
      return 1.0 / (z - center_);
  }
  return {};
}

cplx Measure::stieltjes_derivative(cplx z) const {
  if (support_distance(z) <= kSupportTolerance) throw DomainError("stieltjes_derivative: point on the support");
  auto inv2 = [](cplx w) { return -1.0 / (w * w); };
  switch (kind_) {
    case MeasureKind::UniformCircle:
      return std::abs(z - center_) > radius_ ? inv2(z - center_) : cplx{0.0, 0.0};
    case MeasureKind::TwoCircles: {
      cplx sum{0.0, 0.0};
      for (double side : {-kHalfGap, kHalfGap}) {
        const cplx w = z - center_ - side;
        if (std::abs(w) > 1.0) sum += 0.5 * inv2(w);
      }
      return sum;
    }
    case MeasureKind::UniformDisk:
    case MeasureKind::Degenerate:
      return inv2(z - center_);
    case MeasureKind::UniformRegion:
      return -polygon_integral(polygon_, z, true) / area_;
    case MeasureKind::Atomic: {
      cplx sum{0.0, 0.0};
      for (const Atom& a : atoms_) sum += a.weight * inv2(z - a.point);
      return sum;
    }
  }
  return {};
}

double Measure::hull_distance(cplx z) const {
  switch (kind_) {
    case MeasureKind::UniformCircle:
    case MeasureKind::UniformDisk:
      return std::max(0.0, std::abs(z - center_) - radius_);
    case MeasureKind::TwoCircles:
      return std::max(0.0, segment_distance(z, center_ - kHalfGap, center_ + kHalfGap) - 1.0);
    default:
      return critpair::hull_distance(hull_, z);
  }
}

Measure Measure::translated(cplx a) const {
  switch (kind_) {
    case MeasureKind::UniformCircle:
      return uniform_circle(center_ + a, radius_);
    case MeasureKind::TwoCircles:
      return two_circles(center_ + a);
    case MeasureKind::UniformDisk:
      return uniform_disk(center_ + a, radius_);
    case MeasureKind::UniformRegion: {
      std::vector<cplx> p = polygon_;
      for (cplx& v : p) v += a;
      return uniform_region(std::move(p));
    }
    case MeasureKind::Atomic: {
      std::vector<Atom> at = atoms_;
      for (Atom& x : at) x.point += a;
      return atomic(std::move(at));
    }
    case MeasureKind::Degenerate:
      return degenerate(center_ + a);
  }
  return *this;
}

std::string Measure::describe() const {
  switch (kind_) {
    case MeasureKind::UniformCircle:
      return "uniform_circle(center=" + fmt(center_) + ", radius=" + std::to_string(radius_) + ")";
    case MeasureKind::TwoCircles:
      return "two_circles(center=" + fmt(center_) + ")";
    case MeasureKind::UniformDisk:
      return "uniform_disk(center=" + fmt(center_) + ", radius=" + std::to_string(radius_) + ")";
    case MeasureKind::UniformRegion:
      return "uniform_region(" + std::to_string(polygon_.size()) + " vertices)";
    case MeasureKind::Atomic:
      return "atomic(" + std::to_string(atoms_.size()) + " atoms)";
    case MeasureKind::Degenerate:
      return "degenerate(" + fmt(center_) + ")";
  }
  return {};
}

cplx region_stieltjes_quadrature(const std::vector<cplx>& polygon, cplx z, double rtol) {
  // Degree-5 seven-point rule on triangles, compared against its four-way
  // refinement.
  static constexpr double kW[3] = {0.225, 0.132394152788506, 0.125939180544827};
  static constexpr double kA = 0.470142064105115, kB = 0.059715871789770;
  static constexpr double kC = 0.101286507323456, kD = 0.797426985353087;
  auto f = [z](cplx x) { return 1.0 / (z - x); };
  auto rule = [&](cplx p, cplx q, cplx r) {
    const double area = 0.5 * std::abs(cross(p, q, r));
    cplx s = kW[0] * f((p + q + r) / 3.0);
    s += kW[1] * (f(kA * p + kA * q + kB * r) + f(kA * p + kB * q + kA * r) + f(kB * p + kA * q + kA * r));
    s += kW[2] * (f(kC * p + kC * q + kD * r) + f(kC * p + kD * q + kC * r) + f(kD * p + kC * q + kC * r));
    return area * s;
  };

  const auto tris = triangulate(polygon);
  const double area = std::abs(signed_area(polygon));
  cplx coarse{0.0, 0.0};
  for (const auto& t : tris) coarse += rule(t[0], t[1], t[2]);
  const double target = rtol * std::max(std::abs(coarse), 1e-300);

  std::function<cplx(cplx, cplx, cplx, cplx, double, int)> refine = [&](cplx p, cplx q, cplx r, cplx whole,
                                                                         double tol, int depth) -> cplx {
    const cplx pq = 0.5 * (p + q), qr = 0.5 * (q + r), rp = 0.5 * (r + p);
    const cplx parts[4] = {rule(p, pq, rp), rule(pq, q, qr), rule(rp, qr, r), rule(pq, qr, rp)};
    const cplx fine = parts[0] + parts[1] + parts[2] + parts[3];
    if (std::abs(fine - whole) <= tol || depth >= 20) return fine;
    const double sub = 0.25 * tol;
    return refine(p, pq, rp, parts[0], sub, depth + 1) + refine(pq, q, qr, parts[1], sub, depth + 1) +
           refine(rp, qr, r, parts[2], sub, depth + 1) + refine(pq, qr, rp, parts[3], sub, depth + 1);
  };

  cplx total{0.0, 0.0};
  for (const auto& t : tris) {
    const double share = 0.5 * std::abs(cross(t[0], t[1], t[2])) / area;
    total += refine(t[0], t[1], t[2], rule(t[0], t[1], t[2]), 0.1 * target * share, 0);
  }
  return total / area;
}

std::vector<cplx> blob_polygon(int vertices) {
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(vertices));
  for (int k = 0; k < vertices; ++k) {
    const double t = kTwoPi * k / vertices;
    const double r = 0.65 + 0.12 * std::cos(3.0 * t) + 0.07 * std::sin(2.0 * t + 0.5);
    out.push_back(r * unit(t));
  }
  return out;
}

double ZeroSet::distance(cplx z) const {
  switch (kind) {
    case ZeroSetKind::Empty:
      return std::numeric_limits<double>::infinity();
    case ZeroSetKind::OpenDisk:
      return std::max(0.0, std::abs(z - disk_center) - disk_radius);
    case ZeroSetKind::Points:
    case ZeroSetKind::Unknown: {
      double d = std::numeric_limits<double>::infinity();
      for (const cplx& p : points) d = std::min(d, std::abs(z - p));
      return d;
    }
  }
  return std::numeric_limits<double>::infinity();
}

namespace {

ZeroSet region_zero_set(const Measure& mu, double pitch) {
  ZeroSet out;
  out.kind = ZeroSetKind::Points;
  out.approximate = true;

  const auto& poly = mu.polygon();
  double xmin = poly[0].real(), xmax = xmin, ymin = poly[0].imag(), ymax = ymin;
  for (const cplx& v : poly) {
    xmin = std::min(xmin, v.real());
    xmax = std::max(xmax, v.real());
    ymin = std::min(ymin, v.imag());
    ymax = std::max(ymax, v.imag());
  }
  const int nx = static_cast<int>(std::ceil((xmax - xmin) / pitch)) + 1;
  const int ny = static_cast<int>(std::ceil((ymax - ymin) / pitch)) + 1;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> mag(static_cast<std::size_t>(nx) * ny, nan);
  auto at = [&](int i, int j) { return cplx{xmin + i * pitch, ymin + j * pitch}; };
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const cplx z = at(i, j);
      if (mu.hull_distance(z) > 0.0 || mu.support_distance(z) <= 1e-6) continue;
      mag[static_cast<std::size_t>(i) * ny + j] = std::abs(mu.stieltjes(z));
    }
  }

  bool ambiguous = false;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const double v = mag[static_cast<std::size_t>(i) * ny + j];
      if (std::isnan(v)) continue;
      bool minimum = true;
      for (int di = -1; di <= 1 && minimum; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          const int a = i + di, b = j + dj;
          if ((di == 0 && dj == 0) || a < 0 || b < 0 || a >= nx || b >= ny) continue;
          const double w = mag[static_cast<std::size_t>(a) * ny + b];
          if (!std::isnan(w) && w < v) {
            minimum = false;
            break;
          }
        }
      }
      if (!minimum) continue;

      const cplx start = at(i, j);
      cplx z = start;
      bool found = false;
      for (int it = 0; it < 60; ++it) {
        if (mu.support_distance(z) <= kSupportTolerance) break;
        const cplx m = mu.stieltjes(z);
        if (std::abs(m) < 1e-10) {
          found = true;
          break;
        }
        const cplx dm = mu.stieltjes_derivative(z);
        if (dm == cplx{0.0, 0.0}) break;
        z -= m / dm;
        if (std::abs(z - start) > 4.0 * pitch) break;
      }
      if (found && mu.hull_distance(z) <= kSupportTolerance) {
        const bool known = std::any_of(out.points.begin(), out.points.end(),
                                       [&](cplx p) { return std::abs(p - z) < 1e-8; });
        if (!known) out.points.push_back(z);
        continue;
      }
      // A zero within one grid cell would make |m| at most about |m'| * pitch.
      const double slope = std::abs(mu.stieltjes_derivative(start));
      if (v <= 2.0 * slope * pitch) ambiguous = true;
    }
  }
  if (ambiguous) out.kind = ZeroSetKind::Unknown;
  else if (out.points.empty()) out.kind = ZeroSetKind::Empty;
  return out;
}

}  // namespace

ZeroSet zero_set(const Measure& mu, double pitch) {
  ZeroSet out;
  switch (mu.kind()) {
    case MeasureKind::UniformCircle:
      out.kind = ZeroSetKind::OpenDisk;
      out.disk_center = mu.center();
      out.disk_radius = mu.radius();
      return out;
    case MeasureKind::TwoCircles:
      out.kind = ZeroSetKind::Points;
      out.points = {mu.center()};
      return out;
    case MeasureKind::UniformDisk:
    case MeasureKind::Degenerate:
      return out;
    case MeasureKind::UniformRegion:
      if (!(pitch > 0.0)) throw std::invalid_argument("zero_set: pitch must be positive");
      return region_zero_set(mu, pitch);
    case MeasureKind::Atomic: {
      std::vector<cplx> pts;
      for (const Atom& a : mu.atoms()) pts.push_back(a.point);
      const RootClusters clusters = cluster_roots(pts);
      if (clusters.centers.size() < 2) return out;
      std::vector<double> weights(clusters.centers.size(), 0.0);
      for (const Atom& a : mu.atoms()) {
        for (std::size_t i = 0; i < clusters.centers.size(); ++i) {
          if (a.point == clusters.centers[i] ||
              std::abs(a.point - clusters.centers[i]) <= 1e-12 * std::max(std::abs(a.point), std::abs(clusters.centers[i]))) {
            weights[i] += a.weight;
            break;
          }
        }
      }
      const WeightedZeros zeros = weighted_log_derivative_zeros(clusters.centers, weights, 1e-14);
      out.kind = ZeroSetKind::Points;
      out.points = zeros.zeros;
      return out;
    }
  }
  return out;
}

Neighborhood::Neighborhood(Measure mu, double pitch) : mu_(std::move(mu)), zeros_(zero_set(mu_, pitch)) {}

double Neighborhood::distance(cplx z) const { return std::min(mu_.support_distance(z), zeros_.distance(z)); }

bool in_neighborhood(const Measure& mu, double eps, cplx z) { return Neighborhood(mu).contains(eps, z); }

bool in_support_neighborhood(const Measure& mu, double eps, cplx z) { return mu.support_distance(z) < eps; }

bool mu_zero_subset_hull_check(const Measure& mu) {
  const ZeroSet zs = zero_set(mu);
  constexpr double tol = 1e-9;
  switch (zs.kind) {
    case ZeroSetKind::Empty:
      return true;
    case ZeroSetKind::Unknown:
      return false;
    case ZeroSetKind::Points:
      return std::all_of(zs.points.begin(), zs.points.end(), [&](cplx p) { return mu.hull_distance(p) <= tol; });
    case ZeroSetKind::OpenDisk: {
      const double r = zs.disk_radius;
      for (int k = 0; k < 512; ++k) {
        if (mu.hull_distance(zs.disk_center + r * (1.0 - 1e-12) * unit(kTwoPi * k / 512)) > tol) return false;
      }
      const int steps = 40;
      for (int i = -steps; i <= steps; ++i) {
        for (int j = -steps; j <= steps; ++j) {
          const cplx off{r * i / steps, r * j / steps};
          if (std::abs(off) >= r) continue;
          if (mu.hull_distance(zs.disk_center + off) > tol) return false;
        }
      }
      return true;
    }
  }
  return false;
}

}  // namespace critpair
