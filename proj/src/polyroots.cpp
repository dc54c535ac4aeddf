#include "critpair/polyroots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "critpair/rng.hpp"

namespace critpair {

std::vector<cplx> RootedPolynomial::roots() const {
  std::vector<cplx> all;
  all.reserve(degree());
  all.insert(all.end(), random_roots.begin(), random_roots.end());
  all.insert(all.end(), deterministic_roots.begin(), deterministic_roots.end());
  return all;
}

RootedPolynomial make_polynomial(std::vector<cplx> random_roots, std::vector<cplx> deterministic_roots) {
  RootedPolynomial p{std::move(random_roots), std::move(deterministic_roots)};
  if (p.degree() == 0) throw std::invalid_argument("polynomial must have degree at least 1");
  return p;
}

std::size_t CriticalPointSet::total_multiplicity() const noexcept {
  std::size_t total = 0;
  for (const auto& p : points) total += static_cast<std::size_t>(p.multiplicity);
  return total;
}

std::vector<cplx> CriticalPointSet::expanded() const {
  std::vector<cplx> out;
  out.reserve(total_multiplicity());
  for (const auto& p : points)
    for (int i = 0; i < p.multiplicity; ++i) out.push_back(p.location);
  return out;
}

cplx log_derivative(const RootedPolynomial& poly, cplx z) {
  const double guard = 1e-14 * (1.0 + std::abs(z));
  cplx sum{0.0, 0.0};
  auto accumulate = [&](const std::vector<cplx>& roots) {
    for (const cplx& r : roots) {
      const cplx d = z - r;
      if (std::abs(d) <= guard) throw PoleError("log_derivative: z coincides with a root");
      sum += 1.0 / d;
    }
  };
  accumulate(poly.random_roots);
  accumulate(poly.deterministic_roots);
  return sum;
}

RootedPolynomial translate(const RootedPolynomial& poly, cplx a) {
  RootedPolynomial out = poly;
  for (auto& r : out.random_roots) r += a;
  for (auto& r : out.deterministic_roots) r += a;
  return out;
}

RootClusters cluster_roots(std::span<const cplx> values) {
  std::vector<cplx> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), [](cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });

  auto same = [](cplx a, cplx b) {
    if (a == b) return true;
    return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
  };

  // Near-duplicates differ in the real part by at most the relative
  // tolerance, so only a short window after each entry needs checking.
  std::vector<int> owner(sorted.size(), -1);
  RootClusters out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (owner[i] >= 0) continue;
    const int id = static_cast<int>(out.centers.size());
    owner[i] = id;
    out.centers.push_back(sorted[i]);
    out.multiplicity.push_back(1);
    const double window = 1e-12 * std::abs(sorted[i]) * 2.0;
    for (std::size_t j = i + 1; j < sorted.size() && sorted[j].real() - sorted[i].real() <= window; ++j) {
      if (owner[j] < 0 && same(sorted[i], sorted[j])) {
        owner[j] = id;
        ++out.multiplicity.back();
      }
    }
  }
  return out;
}

namespace {

constexpr int kMaxSweeps = 500;
constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2.0;
// Evaluations whose modulus falls below this multiple of the rounding bound
// carry no further information.
constexpr double kNoiseFactor = 4.0;

struct Evaluation {
  cplx value{};       // sum w_i / (z - c_i)
  cplx derivative{};  // -sum w_i / (z - c_i)^2
  cplx pole_sum{};    // sum 1 / (z - c_i)
  double noise = 0.0;
  double nearest = std::numeric_limits<double>::infinity();
  bool on_pole = false;

  /// Q'/Q for the numerator polynomial Q = value * prod (z - c_i).
  cplx numerator_log_derivative() const { return derivative / value + pole_sum; }
  double residual() const { return std::abs(value) * nearest; }
  bool at_noise_floor() const { return std::abs(value) <= kNoiseFactor * kUnitRoundoff * noise; }
};

Evaluation evaluate(cplx z, std::span<const cplx> centers, std::span<const double> weights) {
  Evaluation e;
  const double zscale = std::abs(z.real()) + std::abs(z.imag());
  double nearest2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double dr = z.real() - centers[i].real();
    const double di = z.imag() - centers[i].imag();
    const double r2 = dr * dr + di * di;
    if (r2 == 0.0) {
      e.on_pole = true;
      return e;
    }
    const cplx t{dr / r2, -di / r2};
    const double wt = weights[i];
    e.pole_sum += t;
    e.value += wt * t;
    e.derivative -= wt * (t * t);
    // Rounding of the differences z - c_i, including the representation of z
    // itself, perturbs each term by about u |t| (1 + |t| (|z| + |c_i|)).
    const double a = std::abs(t.real()) + std::abs(t.imag());
    const double cscale = std::abs(centers[i].real()) + std::abs(centers[i].imag());
    e.noise += wt * a * (1.0 + a * (zscale + cscale));
    nearest2 = std::min(nearest2, r2);
  }
  e.nearest = std::sqrt(nearest2);
  return e;
}

struct AberthRun {
  std::vector<cplx> iterates;
  std::vector<bool> converged;
  bool ok = false;
};

double bounding_diameter(std::span<const cplx> centers) {
  double xmin = centers[0].real(), xmax = xmin, ymin = centers[0].imag(), ymax = ymin;
  for (const cplx& c : centers) {
    xmin = std::min(xmin, c.real());
    xmax = std::max(xmax, c.real());
    ymin = std::min(ymin, c.imag());
    ymax = std::max(ymax, c.imag());
  }
  return std::hypot(xmax - xmin, ymax - ymin);
}

/// One start beside each root except one. Near c_i the function is dominated
/// by w_i / (z - c_i) + R_i with R_i the sum over the other roots, so a zero
/// is expected near c_i - w_i / R_i(c_i). The root whose prediction lies
/// farthest away gets no start.
std::vector<cplx> root_adjacent_starts(std::span<const cplx> centers, std::span<const double> weights) {
  const std::size_t k = centers.size();
  const double diam = bounding_diameter(centers);
  std::vector<cplx> predicted(k);
  std::vector<double> shift(k);
  for (std::size_t i = 0; i < k; ++i) {
    cplx rest{0.0, 0.0};
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) rest += weights[j] / (centers[i] - centers[j]);
    cplx step = rest == cplx{0.0, 0.0} ? cplx{diam, 0.0} : weights[i] / rest;
    if (std::abs(step) > diam) step *= diam / std::abs(step);
    predicted[i] = centers[i] - step;
    shift[i] = std::abs(step);
  }
  const std::size_t skip = static_cast<std::size_t>(std::max_element(shift.begin(), shift.end()) - shift.begin());

  Rng rng(0xC0FFEEULL ^ static_cast<std::uint64_t>(k));
  std::vector<cplx> starts;
  starts.reserve(k - 1);
  for (std::size_t i = 0; i < k; ++i) {
    if (i == skip) continue;
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    starts.push_back(predicted[i] + 1e-3 * shift[i] * cplx{std::cos(theta), std::sin(theta)});
  }
  return starts;
}

std::vector<cplx> circle_starts(std::span<const cplx> centers) {
  double radius = 0.0;
  for (const cplx& c : centers) radius = std::max(radius, std::abs(c));
  radius = radius > 0.0 ? 1.1 * radius : 1.0;
  const std::size_t m = centers.size() - 1;
  std::vector<cplx> starts(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double theta = 2.0 * std::numbers::pi * (static_cast<double>(i) + 0.25) / static_cast<double>(m) + 0.4;
    starts[i] = radius * cplx{std::cos(theta), std::sin(theta)};
  }
  return starts;
}

/// Gauss-Seidel Aberth-Ehrlich sweeps on the numerator of
/// sum w_i / (z - c_i). An iterate is frozen once its normalized residual
/// drops below tol or its value reaches the rounding floor.
AberthRun aberth(std::span<const cplx> centers, std::span<const double> weights, std::vector<cplx> w,
                 double tol) {
  const std::size_t m = w.size();
  AberthRun run;
  run.converged.assign(m, false);
  const double nudge = 1e-10 * (1.0 + bounding_diameter(centers));

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool active = false;
    for (std::size_t k = 0; k < m; ++k) {
      if (run.converged[k]) continue;
      const Evaluation e = evaluate(w[k], centers, weights);
      if (e.on_pole) {
        w[k] += cplx{nudge, nudge};
        active = true;
        continue;
      }
      if (e.residual() < tol || e.at_noise_floor()) {
        run.converged[k] = true;
        continue;
      }
      active = true;
      cplx repulsion{0.0, 0.0};
      bool collided = false;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == k) continue;
        const cplx d = w[k] - w[j];
        if (d == cplx{0.0, 0.0}) {
          collided = true;
          break;
        }
        repulsion += 1.0 / d;
      }
      if (collided) {
        w[k] += cplx{nudge, -nudge};
        continue;
      }
      const cplx denom = e.numerator_log_derivative() - repulsion;
      if (denom == cplx{0.0, 0.0} || !std::isfinite(denom.real()) || !std::isfinite(denom.imag())) {
        w[k] += cplx{-nudge, nudge};
        continue;
      }
      w[k] -= 1.0 / denom;
    }
    if (!active) break;
  }
  run.ok = std::all_of(run.converged.begin(), run.converged.end(), [](bool c) { return c; });
  run.iterates = std::move(w);
  return run;
}

struct Cluster {
  cplx centroid;
  int size;
};

/// Certify that a disk around the group `members` contains exactly
/// members.size() zeros, and return their centroid. The contour integrals
/// (1/2 pi i) \oint z^j L'/L dz, j = 0, 1, count and sum the zeros of the
/// numerator because all poles lie outside the contour.
std::optional<Cluster> certify_cluster(const std::vector<cplx>& w, const std::vector<std::size_t>& members,
                                       std::span<const cplx> centers, std::span<const double> weights) {
  cplx mean{0.0, 0.0};
  for (std::size_t k : members) mean += w[k];
  mean /= static_cast<double>(members.size());

  double r_in = 0.0;
  for (std::size_t k : members) r_in = std::max(r_in, std::abs(w[k] - mean));
  double r_out = std::numeric_limits<double>::infinity();
  for (const cplx& c : centers) r_out = std::min(r_out, std::abs(c - mean));
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (std::find(members.begin(), members.end(), j) == members.end())
      r_out = std::min(r_out, std::abs(w[j] - mean));
  }
  if (!(r_in < 0.9 * r_out)) return std::nullopt;

  const double radius = 0.5 * (r_in + r_out);
  const double decay = std::min(radius / std::max(r_in, 1e-300), r_out / radius);
  const double needed = 40.0 / std::log(decay);
  if (!(needed < 8192.0)) return std::nullopt;
  const int nodes = std::max(64, static_cast<int>(std::ceil(needed)));

  cplx count{0.0, 0.0}, first_moment{0.0, 0.0};
  for (int t = 0; t < nodes; ++t) {
    const double theta = 2.0 * std::numbers::pi * t / nodes;
    const cplx offset = radius * cplx{std::cos(theta), std::sin(theta)};
    const cplx z = mean + offset;
    const Evaluation e = evaluate(z, centers, weights);
    if (e.on_pole || std::abs(e.value) <= 1e3 * kUnitRoundoff * e.noise) return std::nullopt;
    const cplx f = e.derivative / e.value * offset;
    count += f;
    first_moment += z * f;
  }
  count /= static_cast<double>(nodes);
  first_moment /= static_cast<double>(nodes);

  const double size = static_cast<double>(members.size());
  if (std::abs(count - size) > 1e-2) return std::nullopt;
  return Cluster{first_moment / size, static_cast<int>(members.size())};
}

}  // namespace

WeightedZeros weighted_log_derivative_zeros(std::span<const cplx> centers, std::span<const double> weights,
                                            double tol) {
  if (centers.size() != weights.size()) throw std::invalid_argument("centers and weights differ in length");
  WeightedZeros out;
  if (centers.size() < 2) return out;

  AberthRun run = aberth(centers, weights, root_adjacent_starts(centers, weights), tol);
  if (!run.ok) run = aberth(centers, weights, circle_starts(centers), tol);
  if (!run.ok) {
    std::vector<cplx> bad;
    std::vector<double> res;
    for (std::size_t k = 0; k < run.iterates.size(); ++k) {
      if (run.converged[k]) continue;
      bad.push_back(run.iterates[k]);
      res.push_back(evaluate(run.iterates[k], centers, weights).residual());
    }
    throw ConvergenceError("Aberth iteration did not converge within 500 sweeps", std::move(bad), std::move(res));
  }

  const std::vector<cplx>& w = run.iterates;
  const std::size_t m = w.size();
  // Inclusion radius (deg Q) |Q/Q'|: each such disk holds at least one zero.
  std::vector<double> radius(m);
  std::vector<double> residual(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Evaluation e = evaluate(w[k], centers, weights);
    residual[k] = e.residual();
    const double q_ratio = std::abs(e.numerator_log_derivative());
    radius[k] = e.value == cplx{0.0, 0.0} ? 0.0 : static_cast<double>(m) / q_ratio;
  }

  // Connected components of overlapping inclusion disks.
  std::vector<std::size_t> by_real(m);
  std::iota(by_real.begin(), by_real.end(), std::size_t{0});
  std::sort(by_real.begin(), by_real.end(), [&](std::size_t a, std::size_t b) { return w[a].real() < w[b].real(); });
  const double widest = m ? *std::max_element(radius.begin(), radius.end()) : 0.0;
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < m; ++a) {
    const std::size_t i = by_real[a];
    for (std::size_t b = a + 1; b < m; ++b) {
      const std::size_t j = by_real[b];
      if (w[j].real() - w[i].real() > radius[i] + widest) break;
      if (std::abs(w[i] - w[j]) <= radius[i] + radius[j]) parent[find(i)] = find(j);
    }
  }

  std::vector<std::vector<std::size_t>> groups(m);
  for (std::size_t k = 0; k < m; ++k) groups[find(k)].push_back(k);
  for (std::size_t k = 0; k < m; ++k) {
    const auto& g = groups[k];
    if (g.empty()) continue;
    std::optional<Cluster> cluster;
    if (g.size() > 1) cluster = certify_cluster(w, g, centers, weights);
    if (cluster) {
      out.zeros.push_back(cluster->centroid);
      out.multiplicity.push_back(cluster->size);
      out.residuals.push_back(evaluate(cluster->centroid, centers, weights).residual());
    } else {
      for (std::size_t idx : g) {
        out.zeros.push_back(w[idx]);
        out.multiplicity.push_back(1);
        out.residuals.push_back(residual[idx]);
      }
    }
  }
  return out;
}

CriticalPointSet critical_points(const RootedPolynomial& poly, double tol) {
  if (!(tol >= 1e-14 && tol <= 1e-6)) throw std::invalid_argument("critical_points: tol must lie in [1e-14, 1e-6]");
  if (poly.degree() == 0) throw std::invalid_argument("critical_points: polynomial of degree 0");

  const std::vector<cplx> all = poly.roots();
  const RootClusters clusters = cluster_roots(all);

  CriticalPointSet out;
  out.solver = Solver::Aberth;
  for (std::size_t i = 0; i < clusters.centers.size(); ++i) {
    if (clusters.multiplicity[i] > 1) out.points.push_back({clusters.centers[i], clusters.multiplicity[i] - 1, 0.0});
  }
  if (clusters.centers.size() >= 2) {
    std::vector<double> weights(clusters.multiplicity.begin(), clusters.multiplicity.end());
    const WeightedZeros zeros = weighted_log_derivative_zeros(clusters.centers, weights, tol);
    for (std::size_t k = 0; k < zeros.zeros.size(); ++k)
      out.points.push_back({zeros.zeros[k], zeros.multiplicity[k], zeros.residuals[k]});
  }
  return out;
}

}  // namespace critpair
