#pragma once

#include <optional>
#include <string>
#include <vector>

#include "critpair/measure.hpp"

namespace critpair {

struct Viewport {
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
};

struct SupportCurve {
  enum class Shape { Circle, Polygon } shape = Shape::Circle;
  cplx center{};
  double radius = 0.0;
  std::vector<cplx> vertices;
};

struct FigureSpec {
  std::vector<cplx> roots;            // red circles
  std::vector<cplx> critical_points;  // blue crosses
  std::vector<SupportCurve> support;  // black
  std::vector<cplx> pairing_centers;  // green circles of radius pairing_radius
  double pairing_radius = 0.0;
  Viewport viewport;
};

/// Boundary curves of the support; none for atomic and point measures.
std::vector<SupportCurve> support_curves(const Measure& mu);

/// Square viewport around every point and curve with a 10% margin;
/// [-1, 1]^2 when there is nothing to show.
Viewport fit_viewport(const FigureSpec& spec);

/// Deterministic SVG text. Glyph elements carry the classes root, critical,
/// support, pairing and axis.
std::string render_svg(const FigureSpec& spec);

}  // namespace critpair
