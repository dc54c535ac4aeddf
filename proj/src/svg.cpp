#include "critpair/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace critpair {

namespace {

constexpr double kCanvas = 600.0;

std::string num(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 2);
  std::string s(buf, res.ptr);
  if (s == "-0.00") s = "0.00";
  return s;
}

struct Mapper {
  double scale, x0, y1;
  double x(double re) const { return (re - x0) * scale; }
  double y(double im) const { return (y1 - im) * scale; }
};

}  // namespace

std::vector<SupportCurve> support_curves(const Measure& mu) {
  std::vector<SupportCurve> out;
  switch (mu.kind()) {
    case MeasureKind::UniformCircle:
    case MeasureKind::UniformDisk:
      out.push_back({SupportCurve::Shape::Circle, mu.center(), mu.radius(), {}});
      break;
    case MeasureKind::TwoCircles:
      out.push_back({SupportCurve::Shape::Circle, mu.center() - 2.5, 1.0, {}});
      out.push_back({SupportCurve::Shape::Circle, mu.center() + 2.5, 1.0, {}});
      break;
    case MeasureKind::UniformRegion:
      out.push_back({SupportCurve::Shape::Polygon, {}, 0.0, mu.polygon()});
      break;
    case MeasureKind::Atomic:
    case MeasureKind::Degenerate:
      break;
  }
  return out;
}

Viewport fit_viewport(const FigureSpec& spec) {
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  auto add = [&](cplx z, double pad) {
    xmin = std::min(xmin, z.real() - pad);
    xmax = std::max(xmax, z.real() + pad);
    ymin = std::min(ymin, z.imag() - pad);
    ymax = std::max(ymax, z.imag() + pad);
  };
  for (cplx z : spec.roots) add(z, 0.0);
  for (cplx z : spec.critical_points) add(z, 0.0);
  for (cplx z : spec.pairing_centers) add(z, spec.pairing_radius);
  for (const auto& c : spec.support) {
    if (c.shape == SupportCurve::Shape::Circle) add(c.center, c.radius);
    for (cplx v : c.vertices) add(v, 0.0);
  }
  if (!(xmin <= xmax)) return {};
  const double half = 0.55 * std::max({xmax - xmin, ymax - ymin, 1e-6});
  const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
  return {cx - half, cx + half, cy - half, cy + half};
}

std::string render_svg(const FigureSpec& spec) {
  const Viewport& v = spec.viewport;
  const double span = std::max(v.xmax - v.xmin, v.ymax - v.ymin);
  const Mapper m{kCanvas / span, v.xmin, v.ymax};
  const double glyph = 4.0;

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kCanvas) + "\" height=\"" + num(kCanvas) +
       "\" viewBox=\"0 0 " + num(kCanvas) + " " + num(kCanvas) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + num(kCanvas) + "\" height=\"" + num(kCanvas) + "\" fill=\"white\"/>\n";

  // Axes through the origin, clamped to the frame.
  const double ax = std::clamp(m.x(0.0), 0.0, kCanvas), ay = std::clamp(m.y(0.0), 0.0, kCanvas);
  s += "<line class=\"axis\" x1=\"0.00\" y1=\"" + num(ay) + "\" x2=\"" + num(kCanvas) + "\" y2=\"" + num(ay) +
       "\" stroke=\"#999999\" stroke-width=\"0.5\"/>\n";
  s += "<line class=\"axis\" x1=\"" + num(ax) + "\" y1=\"0.00\" x2=\"" + num(ax) + "\" y2=\"" + num(kCanvas) +
       "\" stroke=\"#999999\" stroke-width=\"0.5\"/>\n";

  for (const auto& c : spec.support) {
    if (c.shape == SupportCurve::Shape::Circle) {
      s += "<circle class=\"support\" cx=\"" + num(m.x(c.center.real())) + "\" cy=\"" + num(m.y(c.center.imag())) +
           "\" r=\"" + num(c.radius * m.scale) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    } else {
      s += "<polygon class=\"support\" points=\"";
      for (std::size_t i = 0; i < c.vertices.size(); ++i) {
        if (i) s += ' ';
        s += num(m.x(c.vertices[i].real())) + "," + num(m.y(c.vertices[i].imag()));
      }
      s += "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }
  }
  for (cplx z : spec.pairing_centers)
    s += "<circle class=\"pairing\" cx=\"" + num(m.x(z.real())) + "\" cy=\"" + num(m.y(z.imag())) + "\" r=\"" +
         num(spec.pairing_radius * m.scale) + "\" fill=\"none\" stroke=\"green\" stroke-width=\"1\"/>\n";
  for (cplx z : spec.roots)
    s += "<circle class=\"root\" cx=\"" + num(m.x(z.real())) + "\" cy=\"" + num(m.y(z.imag())) + "\" r=\"" +
         num(glyph) + "\" fill=\"none\" stroke=\"red\" stroke-width=\"1\"/>\n";
  for (cplx z : spec.critical_points) {
    const double x = m.x(z.real()), y = m.y(z.imag());
    s += "<path class=\"critical\" d=\"M" + num(x - glyph) + " " + num(y - glyph) + " L" + num(x + glyph) + " " +
         num(y + glyph) + " M" + num(x - glyph) + " " + num(y + glyph) + " L" + num(x + glyph) + " " +
         num(y - glyph) + "\" stroke=\"blue\" stroke-width=\"1\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace critpair
