#include "critpair/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace critpair {

double cross(cplx a, cplx b, cplx c) noexcept {
  return (b.real() - a.real()) * (c.imag() - a.imag()) - (b.imag() - a.imag()) * (c.real() - a.real());
}

cplx segment_nearest(cplx z, cplx a, cplx b) noexcept {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return a;
  const double t = std::clamp(((z - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return a + t * d;
}

double segment_distance(cplx z, cplx a, cplx b) noexcept { return std::abs(z - segment_nearest(z, a, b)); }

double signed_area(std::span<const cplx> polygon) noexcept {
  double twice = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const cplx a = polygon[i], b = polygon[(i + 1) % polygon.size()];
    twice += a.real() * b.imag() - b.real() * a.imag();
  }
  return 0.5 * twice;
}

bool point_in_polygon(std::span<const cplx> polygon, cplx z) noexcept {
  const std::size_t n = polygon.size();
  if (n == 0) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const cplx a = polygon[i], b = polygon[j];
    if (segment_distance(z, a, b) == 0.0) return true;
    if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
      const double x = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      if (z.real() < x) inside = !inside;
    }
  }
  return inside;
}

cplx boundary_nearest(std::span<const cplx> polygon, cplx z) noexcept {
  cplx best = polygon.empty() ? z : polygon[0];
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const cplx p = segment_nearest(z, polygon[i], polygon[(i + 1) % polygon.size()]);
    const double d = std::abs(z - p);
    if (d < best_d) {
      best_d = d;
      best = p;
    }
  }
  return best;
}

double boundary_distance(std::span<const cplx> polygon, cplx z) noexcept {
  return std::abs(z - boundary_nearest(polygon, z));
}

std::vector<cplx> convex_hull(std::span<const cplx> points) {
  std::vector<cplx> p(points.begin(), points.end());
  std::sort(p.begin(), p.end(), [](cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;
  std::vector<cplx> hull(2 * p.size());
  std::size_t k = 0;
  for (const cplx& q : p) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], q) <= 0.0) --k;
    hull[k++] = q;
  }
  for (std::size_t i = p.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p[i]) <= 0.0) --k;
    hull[k++] = p[i];
  }
  hull.resize(k - 1);
  return hull;
}

double hull_distance(std::span<const cplx> hull, cplx z) noexcept {
  if (hull.empty()) return std::numeric_limits<double>::infinity();
  if (hull.size() == 1) return std::abs(z - hull[0]);
  if (hull.size() == 2) return segment_distance(z, hull[0], hull[1]);
  bool inside = true;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    if (cross(hull[i], hull[(i + 1) % hull.size()], z) < 0.0) {
      inside = false;
      break;
    }
  }
  return inside ? 0.0 : boundary_distance(hull, z);
}

std::vector<std::array<cplx, 3>> triangulate(std::span<const cplx> polygon) {
  std::vector<cplx> v(polygon.begin(), polygon.end());
  if (signed_area(v) < 0.0) std::reverse(v.begin(), v.end());
  std::vector<std::array<cplx, 3>> out;
  while (v.size() > 3) {
    const std::size_t n = v.size();
    bool clipped = false;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx a = v[(i + n - 1) % n], b = v[i], c = v[(i + 1) % n];
      if (cross(a, b, c) <= 0.0) continue;
      bool blocked = false;
      for (std::size_t j = 0; j < n && !blocked; ++j) {
        const cplx p = v[j];
        if (p == a || p == b || p == c) continue;
        blocked = cross(a, b, p) >= 0.0 && cross(b, c, p) >= 0.0 && cross(c, a, p) >= 0.0;
      }
      if (blocked) continue;
      out.push_back({a, b, c});
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) throw std::invalid_argument("triangulate: polygon is not simple");
  }
  if (v.size() == 3) out.push_back({v[0], v[1], v[2]});
  return out;
}

}  // namespace critpair
