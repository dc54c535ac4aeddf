#include <doctest.h>

#include "critpair/measure.hpp"
#include "critpair/nets.hpp"
#include "support.hpp"

using namespace critpair;

namespace {

double brute_nearest(const std::vector<cplx>& pts, cplx z) {
  double best = INFINITY;
  for (const cplx& p : pts) best = std::min(best, std::abs(p - z));
  return best;
}

// Uniform probes of the domain inside |z| <= bound, by rejection.
std::vector<cplx> probes(const Region& domain, double bound, Rng& rng, std::size_t count) {
  std::vector<cplx> out;
  for (std::size_t tries = 0; out.size() < count && tries < 200 * count; ++tries) {
    const cplx z(rng.uniform(-bound, bound), rng.uniform(-bound, bound));
    if (std::abs(z) <= bound && domain.contains(z)) out.push_back(z);
  }
  return out;
}

}  // namespace

TEST_CASE("unit disk with eps = 1") {
  const auto disk = disk_region(0.0, 1.0);
  const Net net = build_net(*disk, 1.0, 1.0);
  CHECK(net.points.size() <= 25);
  CHECK(net.cardinality_bound() == doctest::Approx(25.0));
  Rng rng(1);
  for (const cplx& z : probes(*disk, 1.0, rng, 2000)) CHECK(brute_nearest(net.points, z) <= 1.0);
}

TEST_CASE("a single point is its own net") {
  const cplx a(0.7, -0.4);
  const Net net = build_net(*point_region(a), std::abs(a) + 1.0, 0.3);
  REQUIRE(net.points.size() == 1);
  CHECK(net.points[0] == a);
}

TEST_CASE("unit circle with eps = 0.1") {
  const auto circle = circle_region(0.0, 1.0);
  const Net net = build_net(*circle, 1.0, 0.1);
  CHECK(net.points.size() <= 1681);
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
    CHECK(brute_nearest(net.points, z) <= 0.1);
  }
  for (const cplx& p : net.points) CHECK(std::abs(std::abs(p) - 1.0) < 1e-12);
}

TEST_CASE("anchors are eps/2 separated and points lie in the domain") {
  const auto domain = annulus_region({0.3, 0.0}, 0.5, 1.5);
  const double eps = 0.2;
  const Net net = build_net(*domain, 2.0, eps);
  for (std::size_t i = 0; i < net.anchors.size(); ++i)
    for (std::size_t j = i + 1; j < net.anchors.size(); ++j) CHECK(std::abs(net.anchors[i] - net.anchors[j]) >= eps / 2.0);
  for (const cplx& p : net.points) CHECK(domain->contains(p));
  CHECK(static_cast<double>(net.points.size()) <= net.cardinality_bound());
}

TEST_CASE("nets are deterministic") {
  const auto domain = polygon_region(blob_polygon());
  const Net a = build_net(*domain, 1.0, 0.05), b = build_net(*domain, 1.0, 0.05);
  CHECK(a.points == b.points);
}

TEST_CASE("disk minus annuli: membership and nearest points") {
  const auto region = disk_minus_annuli(0.0, 3.0, {{{0.0, 0.0}, 0.85, 1.15}, {{2.0, 0.0}, -1.0, 0.5}});
  CHECK(region->contains(0.0));
  CHECK_FALSE(region->contains(1.0));
  CHECK(region->contains(1.2));
  CHECK_FALSE(region->contains({2.2, 0.1}));
  CHECK_FALSE(region->contains(3.5));

  Rng rng(3);
  const auto inside = probes(*region, 3.0, rng, 4000);
  for (int i = 0; i < 200; ++i) {
    const cplx z(rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0));
    const auto n = region->nearest(z);
    REQUIRE(n.has_value());
    CHECK(std::abs(*n) <= 3.0 + 1e-9);
    CHECK(std::abs(*n - 2.0) >= 0.5 - 1e-9);
    CHECK(std::abs(std::abs(*n) - 1.0) >= 0.15 - 1e-9);
    // No sampled domain point is meaningfully closer.
    CHECK(std::abs(*n - z) <= brute_nearest(inside, z) + 1e-9);
  }
}

TEST_CASE("outside-support regions match the neighbourhood test") {
  Rng rng(4);
  for (const Measure& mu : {Measure::uniform_circle({0.0, 0.0}, 1.0), Measure::two_circles(),
                            Measure::uniform_disk({0.5, 0.0}, 0.7), Measure::degenerate({0.2, 0.2})}) {
    const double bound = mu.support_bound() + 1.0, eps = 0.15;
    const auto region = outside_support_region(mu, bound, eps);
    for (int i = 0; i < 500; ++i) {
      const cplx z(rng.uniform(-bound, bound), rng.uniform(-bound, bound));
      const double d = mu.support_distance(z);
      if (std::abs(d - eps) < 1e-9 || std::abs(std::abs(z) - bound) < 1e-9) continue;
      CHECK(region->contains(z) == (std::abs(z) <= bound && d >= eps));
    }
  }
}

TEST_CASE("covering radius helper agrees with brute force") {
  const auto domain = disk_region({0.2, -0.1}, 0.9);
  const Net net = build_net(*domain, 1.2, 0.25);
  const double r = covering_radius(net, *domain, 1.2, 0.02);
  CHECK(r <= 0.25);
  Rng rng(5);
  double worst = 0.0;
  for (const cplx& z : probes(*domain, 1.2, rng, 3000)) worst = std::max(worst, brute_nearest(net.points, z));
  CHECK(worst <= 0.25);
  CHECK(worst <= r + 0.03);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(build_net(*disk_region(0.0, 1.0), 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_net(*disk_region(0.0, 1.0), -1.0, 0.1), std::invalid_argument);
}
