#include <doctest.h>

#include <numbers>

#include "critpair/cxlinalg.hpp"
#include "critpair/polyroots.hpp"
#include "support.hpp"

using namespace critpair;
using testing_support::matched_distance;
using testing_support::random_points;
using testing_support::roots_of_unity;

namespace {

// Support-function test: w lies in conv(roots) (up to tol) iff no direction
// separates it. 720 directions make this a tight necessary condition.
bool in_hull_by_support(const std::vector<cplx>& roots, cplx w, double tol) {
  for (int k = 0; k < 720; ++k) {
    const cplx dir = std::polar(1.0, std::numbers::pi * k / 360.0);
    double h = -INFINITY;
    for (const cplx& r : roots) h = std::max(h, (std::conj(dir) * r).real());
    if ((std::conj(dir) * w).real() > h + tol) return false;
  }
  return true;
}

std::vector<cplx> sorted_by_real(std::vector<cplx> v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); });
  return v;
}

}  // namespace

TEST_CASE("log_derivative on small root sets") {
  CHECK(std::abs(log_derivative(make_polynomial({0.0}), 2.0) - 0.5) < 1e-15);
  CHECK(std::abs(log_derivative(make_polynomial({1.0, -1.0}), 0.0)) < 1e-15);
  // p = z^4 - 1: p'(2)/p(2) = 4*8/15 from the coefficient form.
  CHECK(std::abs(log_derivative(make_polynomial(roots_of_unity(4)), 2.0) - 32.0 / 15.0) < 1e-13);
  CHECK_THROWS_AS(log_derivative(make_polynomial({1.0, 2.0}), 1.0), PoleError);
}

TEST_CASE("make_polynomial keeps random roots first") {
  const auto p = make_polynomial({1.0, 2.0}, {cplx(3.0, 1.0)});
  CHECK(p.degree() == 3);
  const auto r = p.roots();
  CHECK(r[2] == cplx(3.0, 1.0));
  CHECK_THROWS_AS(make_polynomial({}), std::invalid_argument);
}

TEST_CASE("quadratic: the critical point is the midpoint") {
  const cplx a(0.3, -1.2), b(-2.0, 0.7);
  const auto cp = critical_points(make_polynomial({a, b}));
  REQUIRE(cp.total_multiplicity() == 1);
  CHECK(std::abs(cp.points[0].location - (a + b) / 2.0) < 1e-12);
}

TEST_CASE("roots {0, 1, i} match the quadratic formula") {
  // p' = 3z^2 - 2(1+i)z + i.
  const cplx A = 3.0, B = cplx(-2.0, -2.0), C = cplx(0.0, 1.0);
  const cplx disc = std::sqrt(B * B - 4.0 * A * C);
  const std::vector<cplx> expected = {(-B + disc) / (2.0 * A), (-B - disc) / (2.0 * A)};
  const auto cp = critical_points(make_polynomial({0.0, 1.0, cplx(0.0, 1.0)}));
  CHECK(matched_distance(cp.expanded(), expected) < 1e-13);
}

TEST_CASE("a double root is a critical point of multiplicity one") {
  const cplx a(1.0, 1.0), b(-2.0, 0.5);
  const auto cp = critical_points(make_polynomial({a, a, b}));
  CHECK(cp.total_multiplicity() == 2);
  const std::vector<cplx> expected = {a, (2.0 * b + a) / 3.0};
  CHECK(matched_distance(cp.expanded(), expected) < 1e-13);
  bool found = false;
  for (const auto& p : cp.points)
    if (p.location == a) found = p.multiplicity == 1;
  CHECK(found);
}

TEST_CASE("higher multiplicity roots") {
  const auto cp = critical_points(make_polynomial({2.0, 2.0, 2.0, 2.0, -1.0}));
  CHECK(cp.total_multiplicity() == 4);
  // (z-2)^4 (z+1): derivative (z-2)^3 (5z + 2).
  const std::vector<cplx> expected = {2.0, 2.0, 2.0, -0.4};
  CHECK(matched_distance(cp.expanded(), expected) < 1e-13);
}

TEST_CASE("roots of unity: all critical points at the origin") {
  for (int n : {2, 5, 17, 100}) {
    const auto cp = critical_points(make_polynomial(roots_of_unity(n)));
    CHECK(cp.total_multiplicity() == static_cast<std::size_t>(n - 1));
    for (const cplx& w : cp.expanded()) CHECK(std::abs(w) < 1e-6);
  }
}

TEST_CASE("roots of unity translated by i cluster at i") {
  const auto p = translate(make_polynomial(roots_of_unity(5)), cplx(0.0, 1.0));
  for (const cplx& w : critical_points(p).expanded()) CHECK(std::abs(w - cplx(0.0, 1.0)) < 1e-6);
}

TEST_CASE("deterministic counterexample has no critical point in |z| <= 3/4") {
  auto roots = roots_of_unity(49);
  roots.push_back(0.5);
  const auto cp = critical_points(make_polynomial(roots));
  CHECK(cp.total_multiplicity() == 49);
  for (const cplx& w : cp.expanded()) CHECK(std::abs(w) > 0.75);
}

TEST_CASE("translation and conjugation equivariance") {
  Rng rng(11);
  const auto p = make_polynomial(random_points(rng, 20));
  const auto base = critical_points(p).expanded();

  const cplx a(3.0, -2.0);
  std::vector<cplx> shifted = base;
  for (auto& w : shifted) w += a;
  CHECK(matched_distance(critical_points(translate(p, a)).expanded(), shifted) < 1e-8);
  const auto tp = translate(make_polynomial({0.0, 1.0}), 1.0);
  CHECK(sorted_by_real(tp.roots()) == std::vector<cplx>{1.0, 2.0});
  CHECK(std::abs(critical_points(tp).points[0].location - 1.5) < 1e-12);

  std::vector<cplx> conj_roots, conj_base;
  for (const cplx& r : p.roots()) conj_roots.push_back(std::conj(r));
  for (const cplx& w : base) conj_base.push_back(std::conj(w));
  CHECK(matched_distance(critical_points(make_polynomial(conj_roots)).expanded(), conj_base) < 1e-10);
}

TEST_CASE("degree count and Gauss-Lucas on random instances") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(120);
    auto roots = random_points(rng, n, 1.0 + 3.0 * rng.uniform());
    if (trial % 4 == 0) roots.push_back(roots.front());
    const auto cp = critical_points(make_polynomial(roots));
    CHECK(cp.total_multiplicity() == roots.size() - 1);
    for (const cplx& w : cp.expanded()) CHECK(in_hull_by_support(roots, w, 1e-8));
  }
}

TEST_CASE("Aberth agrees with companion eigenvalues") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + rng.below(40);
    const auto roots = random_points(rng, n);
    auto eig = eigenvalues(companion_matrix(roots));
    std::size_t zero = 0;
    for (std::size_t i = 1; i < eig.size(); ++i)
      if (std::abs(eig[i]) < std::abs(eig[zero])) zero = i;
    eig.erase(eig.begin() + static_cast<std::ptrdiff_t>(zero));
    CHECK(matched_distance(critical_points(make_polynomial(roots)).expanded(), eig) < 1e-7);
  }
}

TEST_CASE("residuals are small and tolerance is validated") {
  Rng rng(3);
  const auto cp = critical_points(make_polynomial(random_points(rng, 200)));
  for (const auto& p : cp.points) CHECK(p.residual < 1e-8);
  const auto p = make_polynomial({0.0, 1.0});
  CHECK_THROWS_AS(critical_points(p, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(critical_points(p, 1e-16), std::invalid_argument);
  CHECK(critical_points(make_polynomial({cplx(2.0, 1.0)})).total_multiplicity() == 0);
}

TEST_CASE("cluster_roots groups exact repeats") {
  const std::vector<cplx> values = {1.0, 2.0, 1.0, cplx(0.0, 1.0), 2.0, 1.0};
  const auto c = cluster_roots(values);
  REQUIRE(c.centers.size() == 3);
  int total = 0;
  for (std::size_t i = 0; i < c.centers.size(); ++i) {
    total += c.multiplicity[i];
    if (c.centers[i] == cplx(1.0)) CHECK(c.multiplicity[i] == 3);
    if (c.centers[i] == cplx(2.0)) CHECK(c.multiplicity[i] == 2);
  }
  CHECK(total == 6);
}

TEST_CASE("weighted log-derivative zeros") {
  // p/(z-a) + (1-p)/(z-b) vanishes at p b + (1-p) a.
  const std::vector<cplx> centers = {cplx(-1.0, 0.5), cplx(2.0, -1.0)};
  const std::vector<double> weights = {0.3, 0.7};
  const auto z = weighted_log_derivative_zeros(centers, weights, 1e-14);
  REQUIRE(z.zeros.size() == 1);
  CHECK(std::abs(z.zeros[0] - (0.3 * centers[1] + 0.7 * centers[0])) < 1e-14);
}
