#pragma once

#include <array>
#include <span>
#include <vector>

#include "critpair/errors.hpp"

namespace critpair {

/// z-component of (b - a) x (c - a); positive for a counter-clockwise turn.
double cross(cplx a, cplx b, cplx c) noexcept;

double segment_distance(cplx z, cplx a, cplx b) noexcept;
cplx segment_nearest(cplx z, cplx a, cplx b) noexcept;

/// Signed area, positive for counter-clockwise vertex order.
double signed_area(std::span<const cplx> polygon) noexcept;

/// Closed polygon (boundary included, via even-odd rule plus an edge check).
bool point_in_polygon(std::span<const cplx> polygon, cplx z) noexcept;

/// Distance from z to the polygon boundary.
double boundary_distance(std::span<const cplx> polygon, cplx z) noexcept;
cplx boundary_nearest(std::span<const cplx> polygon, cplx z) noexcept;

/// Convex hull by Andrew's monotone chain, counter-clockwise, no collinear
/// vertices. Degenerate inputs give one or two points.
std::vector<cplx> convex_hull(std::span<const cplx> points);

/// Distance from z to the convex set with the given hull (0 inside).
double hull_distance(std::span<const cplx> hull, cplx z) noexcept;

/// Ear-clipping triangulation of a simple polygon (any orientation).
/// Throws std::invalid_argument if no ear can be found.
std::vector<std::array<cplx, 3>> triangulate(std::span<const cplx> polygon);

}  // namespace critpair
