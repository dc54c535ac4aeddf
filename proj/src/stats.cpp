#include "critpair/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "critpair/parallel.hpp"
#include "critpair/rng.hpp"
#include "critpair/transport.hpp"

namespace critpair {

namespace {

bool lex_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

WeightedPoints merge_atoms(std::vector<cplx> atoms) {
  std::sort(atoms.begin(), atoms.end(), lex_less);
  WeightedPoints out;
  for (std::size_t i = 0; i < atoms.size();) {
    std::size_t j = i;
    while (j < atoms.size() && atoms[j] == atoms[i]) ++j;
    out.re.push_back(atoms[i].real());
    out.im.push_back(atoms[i].imag());
    out.weight.push_back(static_cast<std::int64_t>(j - i));
    i = j;
  }
  return out;
}

bool canonical_before(const WeightedPoints& a, const WeightedPoints& b) {
  if (a.re.size() != b.re.size()) return a.re.size() < b.re.size();
  for (std::size_t i = 0; i < a.re.size(); ++i) {
    if (a.re[i] != b.re[i]) return a.re[i] < b.re[i];
    if (a.im[i] != b.im[i]) return a.im[i] < b.im[i];
    if (a.weight[i] != b.weight[i]) return a.weight[i] < b.weight[i];
  }
  return true;
}

// Sup over the points of |(1/n) sum 1/(p - x) - ref(p)|, in blocks that stay
// in cache while the roots stream past.
double sup_deviation(const std::vector<double>& pr, const std::vector<double>& pi,
                     const std::vector<double>& ref_r, const std::vector<double>& ref_i,
                     const std::vector<cplx>& roots) {
  constexpr std::size_t kBlock = 512;
  const double inv_n = 1.0 / static_cast<double>(roots.size());
  double sup = 0.0;
  double sr[kBlock], si[kBlock];
  for (std::size_t start = 0; start < pr.size(); start += kBlock) {
    const std::size_t len = std::min(kBlock, pr.size() - start);
    const double* xr = pr.data() + start;
    const double* xi = pi.data() + start;
    std::fill(sr, sr + len, 0.0);
    std::fill(si, si + len, 0.0);
    for (const cplx& root : roots) {
      const double rr = root.real(), ri = root.imag();
      for (std::size_t p = 0; p < len; ++p) {
        const double dr = xr[p] - rr, di = xi[p] - ri;
        const double inv = 1.0 / (dr * dr + di * di);
        sr[p] += dr * inv;
        si[p] -= di * inv;
      }
    }
    for (std::size_t p = 0; p < len; ++p)
      sup = std::max(sup, std::hypot(sr[p] * inv_n - ref_r[start + p], si[p] * inv_n - ref_i[start + p]));
  }
  return sup;
}

}  // namespace

EmpiricalMeasure::EmpiricalMeasure(std::vector<cplx> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("EmpiricalMeasure: no atoms");
}

EmpiricalMeasure reference_discretization(const Measure& mu) {
  Rng rng(kReferenceSeed);
  return EmpiricalMeasure(mu.sample(kReferenceSamples, rng));
}

double bl_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  WeightedPoints pa = merge_atoms(a.atoms());
  WeightedPoints pb = merge_atoms(b.atoms());
  if (!canonical_before(pa, pb)) std::swap(pa, pb);
  return truncated_w1(pa, pb);
}

double bl_distance(const EmpiricalMeasure& a, const Measure& b) {
  return bl_distance(a, reference_discretization(b));
}

cplx empirical_stieltjes(std::span<const cplx> roots, cplx z) {
  if (roots.empty()) throw std::invalid_argument("empirical_stieltjes: no roots");
  const double guard = 1e-14 * (1.0 + std::abs(z));
  cplx sum{};
  for (const cplx& x : roots) {
    const cplx d = z - x;
    if (std::abs(d) <= guard) throw PoleError("empirical_stieltjes: z is a root");
    sum += 1.0 / d;
  }
  return sum / static_cast<double>(roots.size());
}

std::vector<double> ConcentrationSweep::medians() const {
  std::vector<double> out;
  out.reserve(sup_errors.size());
  for (const auto& row : sup_errors) out.push_back(median(row));
  return out;
}

ConcentrationSweep concentration_sweep(const Measure& mu, double bound, double epsilon,
                                       std::vector<std::size_t> n_values, std::size_t seeds,
                                       std::uint64_t base_seed) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("concentration_sweep: epsilon must be positive");
  if (!(bound > mu.support_bound())) throw std::invalid_argument("concentration_sweep: bound must exceed the support bound");
  for (std::size_t n : n_values)
    if (n == 0) throw std::invalid_argument("concentration_sweep: n must be positive");

  ConcentrationSweep out;
  out.bound = bound;
  out.epsilon = epsilon;
  out.seeds = seeds;
  const RegionPtr region = outside_support_region(mu, bound, epsilon);
  out.net = build_net(*region, bound, epsilon / 10.0);
  if (out.net.points.empty()) throw std::invalid_argument("concentration_sweep: region is empty");

  const std::size_t m = out.net.points.size();
  std::vector<double> pr(m), pi(m), ref_r(m), ref_i(m);
  for (std::size_t p = 0; p < m; ++p) {
    const cplx z = out.net.points[p];
    const cplx ref = mu.stieltjes(z);
    pr[p] = z.real();
    pi[p] = z.imag();
    ref_r[p] = ref.real();
    ref_i[p] = ref.imag();
  }

  out.sup_errors.assign(n_values.size(), std::vector<double>(seeds, 0.0));
  parallel_for(n_values.size() * seeds, [&](std::size_t task) {
    const std::size_t i = task / seeds, s = task % seeds;
    Rng rng(derive_seed(base_seed, n_values[i], s));
    const std::vector<cplx> roots = mu.sample(n_values[i], rng);
    out.sup_errors[i][s] = sup_deviation(pr, pi, ref_r, ref_i, roots);
  });
  out.n_values = std::move(n_values);
  return out;
}

double bump(cplx z, double r) {
  const double t = std::norm(z) / (r * r);
  if (t >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t));
}

double log_Ln_integral(const RootedPolynomial& poly, double r, double pitch) {
  if (!(r > 0.0) || !(pitch > 0.0) || pitch > r / 50.0)
    throw std::invalid_argument("log_Ln_integral: need 0 < pitch <= r/50");
  const std::vector<cplx> roots = poly.roots();
  std::vector<cplx> singular = roots;
  if (poly.degree() > 1) {
    const std::vector<cplx> crit = critical_points(poly).expanded();
    singular.insert(singular.end(), crit.begin(), crit.end());
  }
  const PointIndex index(singular, std::max(pitch, 1e-6));

  const long half = static_cast<long>(std::ceil(r / pitch));
  double sum = 0.0;
  for (long iy = -half; iy < half; ++iy) {
    const double y = (static_cast<double>(iy) + 0.5) * pitch;
    for (long ix = -half; ix < half; ++ix) {
      const cplx z((static_cast<double>(ix) + 0.5) * pitch, y);
      const double phi = bump(z, r);
      if (phi == 0.0) continue;
      if (index.nearest_distance(z, 1e-9) <= 1e-9) continue;
      cplx l;
      try {
        l = log_derivative(poly, z);
      } catch (const PoleError&) {
        continue;
      }
      const double mod = std::abs(l);
      if (mod == 0.0) continue;
      sum += std::log(mod) * phi;
    }
  }
  return sum * pitch * pitch / static_cast<double>(poly.degree());
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need matching samples");
  double mx = 0.0, my = 0.0;
  const double k = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: data must be positive");
    mx += std::log(x[i]) / k;
    my += std::log(y[i]) / k;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("loglog_slope: x values coincide");
  return sxy / sxx;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: no values");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace critpair
