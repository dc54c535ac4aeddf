// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <unistd.h>

#include "critpair/cli.hpp"
#include "critpair/cxlinalg.hpp"
#include "critpair/experiments.hpp"
#include "critpair/io.hpp"
#include "critpair/nets.hpp"
#include "critpair/polyroots.hpp"
#include "critpair/stats.hpp"
#include "support.hpp"

using namespace critpair;
using testing_support::matched_distance;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

Campaign load_campaign(const std::string& name) {
  std::ifstream in(std::string(CRITPAIR_CONFIG_DIR) + "/" + name);
  return config_from_json(nlohmann::json::parse(in)).campaign;
}

Measure mixed_measure(std::size_t i) {
  switch (i % 5) {
    case 0: return Measure::uniform_circle({0.0, 0.0}, 1.0);
    case 1: return Measure::two_circles();
    case 2: return Measure::uniform_disk({0.3, -0.2}, 0.9);
    case 3: return Measure::uniform_region(blob_polygon());
    default: return Measure::atomic({{{-1.0, 0.5}, 0.3}, {{1.0, 0.0}, 0.7}});
  }
}

std::vector<cplx> drop_smallest(std::vector<cplx> eig) {
  std::size_t zero = 0;
  for (std::size_t i = 1; i < eig.size(); ++i)
    if (std::abs(eig[i]) < std::abs(eig[zero])) zero = i;
  eig.erase(eig.begin() + static_cast<std::ptrdiff_t>(zero));
  return eig;
}

std::size_t successes(const CampaignResult& r, std::size_t n) {
  for (const auto& d : r.summary.per_degree)
    if (d.n == n) return d.successes;
  return 0;
}

Outcome companion_identity() {
  Rng rng(101);
  double worst = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    const std::size_t n = 2 + rng.below(59);
    const auto roots = mixed_measure(i).sample(n, rng);
    for (int p = 0; p < 5; ++p) {
      const cplx z(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
      worst = std::max(worst, companion_identity_residual(roots, z));
    }
  }
  return {worst < 1e-9, "max relative residual " + num(worst)};
}

Outcome solver_oracle() {
  Rng rng(102);
  double worst = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    const std::size_t n = 2 + rng.below(59);
    const auto roots = mixed_measure(i).sample(n, rng);
    const auto aberth = critical_points(make_polynomial(roots)).expanded();
    const auto eig = drop_smallest(eigenvalues(companion_matrix(roots)));
    worst = std::max(worst, matched_distance(aberth, eig));
  }
  return {worst < 1e-7, "max matched distance " + num(worst)};
}

Outcome roots_of_unity_cluster() {
  const auto cp = critical_points(make_polynomial(testing_support::roots_of_unity(100))).expanded();
  double worst = 0.0;
  for (const cplx& w : cp) worst = std::max(worst, std::abs(w));
  return {cp.size() == 99 && worst < 1e-6, std::to_string(cp.size()) + " points, max |w| " + num(worst)};
}

Outcome no_outliers() {
  Campaign c;
  c.n_values = {200};
  c.trials = 100;
  c.epsilon = 0.15;
  const auto r = run_no_outliers(c);
  const std::size_t ok = successes(r, 200);
  return {ok >= 99, std::to_string(ok) + "/100 trials with no outliers"};
}

Outcome fig2_pairing() {
  const Campaign c = load_campaign("fig2.json");
  const auto r = run_pairing(c);
  std::size_t ok = 0;
  for (const auto& rec : r.records)
    if (rec.status == TrialStatus::Success && rec.values[0] == 1.0 && rec.values[3] == 1.0) ++ok;
  return {ok >= 95, std::to_string(ok) + "/100 trials with one outlier within 4/101"};
}

Outcome fig3_pairing() {
  const Campaign c = load_campaign("fig3.json");
  const auto r = run_pairing(c);
  std::size_t exact = 0;
  for (const auto& rec : r.records)
    if (rec.n == 203 && rec.values[0] == 3.0) ++exact;
  const double m203 = r.summary.per_degree[0].median, m812 = r.summary.per_degree[1].median;
  return {exact >= 95 && m812 < m203, std::to_string(exact) + "/100 with three outliers at eps " + num(c.epsilon) +
                                          ", median distance " + num(m203) + " -> " + num(m812)};
}

Outcome two_circles() {
  const Campaign c = load_campaign("fig4.json");
  const auto r = run_two_circles_interior(c);
  const std::size_t ok = successes(r, 200);
  const double m200 = r.summary.per_degree[0].median, m1600 = r.summary.per_degree[1].median;
  return {ok >= 99 && m1600 < m200,
          std::to_string(ok) + "/100 with one interior point, median |w| " + num(m200) + " -> " + num(m1600)};
}

Outcome counterexample() {
  auto roots = testing_support::roots_of_unity(49);
  roots.push_back(0.5);
  const auto cp = critical_points(make_polynomial(roots)).expanded();
  double nearest = INFINITY;
  for (const cplx& w : cp) nearest = std::min(nearest, std::abs(w));
  return {cp.size() == 49 && nearest > 0.75, "min |w| " + num(nearest)};
}

Outcome concentration() {
  const std::vector<std::size_t> ns = {100, 400, 1600, 6400};
  const auto sweep = concentration_sweep(Measure::uniform_circle({0.0, 0.0}, 1.0), 3.0, 0.15, ns, 20);
  const auto med = sweep.medians();
  std::vector<double> x(ns.begin(), ns.end());
  const double slope = loglog_slope(x, med);
  return {slope >= -0.65 && slope <= -0.35,
          "slope " + num(slope) + " over " + std::to_string(sweep.net.points.size()) + " net points"};
}

Outcome weak_convergence() {
  Campaign c;
  c.kind = ExperimentKind::Convergence;
  c.n_values = {200, 1000, 5000};
  c.k_rule = {KRule::Kind::FloorPow, 0.5};
  c.xi = {XiRule::Kind::Repeat, {3.0}, 0.0};
  c.trials = 20;
  c.base_seed = 10;
  const auto r = run_convergence(c);
  std::string medians;
  for (const auto& d : r.summary.per_degree) medians += (medians.empty() ? "" : " -> ") + num(d.median);

  Campaign s;
  s.kind = ExperimentKind::Sharpness;
  s.n_values = {1000};
  s.k_rule = {KRule::Kind::CeilFrac, 0.3};
  s.xi = {XiRule::Kind::Repeat, {0.0}, 0.0};
  s.trials = 20;
  s.base_seed = 11;
  const auto q = run_sharpness(s);
  double lowest = INFINITY;
  for (const auto& rec : q.records) lowest = std::isnan(rec.values[0]) ? -1.0 : std::min(lowest, rec.values[0]);
  return {r.summary.medians_decreasing && lowest > 0.05,
          "medians " + medians + ", sharpness min " + num(lowest)};
}

std::vector<cplx> random_star_polygon(Rng& rng) {
  const int m = 5 + static_cast<int>(rng.below(12));
  const cplx c(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
  std::vector<cplx> poly;
  for (int k = 0; k < m; ++k) {
    const double angle = 2.0 * std::numbers::pi * (k + 0.8 * rng.uniform()) / m;
    poly.push_back(c + std::polar(0.3 + 1.2 * rng.uniform(), angle));
  }
  return poly;
}

Outcome nets() {
  Rng rng(111);
  std::size_t good = 0;
  double worst_ratio = 0.0;
  for (int i = 0; i < 50; ++i) {
    RegionPtr domain;
    double bound = 2.0;
    const double eps = 0.08 + 0.4 * rng.uniform();
    std::vector<cplx> boundary;
    if (i % 2 == 0) {
      auto poly = random_star_polygon(rng);
      boundary = poly;
      domain = polygon_region(std::move(poly));
    } else {
      const cplx c(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4));
      const double inner = 0.1 + 0.6 * rng.uniform(), outer = inner + 0.05 + 0.8 * rng.uniform();
      for (int k = 0; k < 64; ++k) {
        boundary.push_back(c + std::polar(inner, std::numbers::pi * k / 32.0));
        boundary.push_back(c + std::polar(outer, std::numbers::pi * k / 32.0));
      }
      domain = annulus_region(c, inner, outer);
    }
    const Net net = build_net(*domain, bound, eps);
    const double cover = covering_radius(net, *domain, bound, eps / 10.0, boundary);
    const bool card = static_cast<double>(net.points.size()) <= net.cardinality_bound();
    worst_ratio = std::max(worst_ratio, cover / eps);
    if (cover <= eps && card && !net.points.empty()) ++good;
  }
  return {good == 50, std::to_string(good) + "/50 domains, worst covering radius / eps " + num(worst_ratio)};
}

Outcome reduced_outliers() {
  Rng rng(112);
  const Measure mu = Measure::uniform_circle({0.0, 0.0}, 1.0);
  const Neighborhood hood(mu);
  const double eps = 0.15;
  std::size_t good = 0;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const std::size_t s = 1 + static_cast<std::size_t>(i % 3);
    const std::size_t n = 100 + rng.below(200);
    std::vector<cplx> xi;
    while (xi.size() < s) {
      const cplx x = std::polar(1.5 + 1.5 * rng.uniform(), 2.0 * std::numbers::pi * rng.uniform());
      bool apart = true;
      for (const cplx& y : xi) apart = apart && std::abs(x - y) > 0.3;
      if (apart) xi.push_back(x);
    }
    const auto inliers = mu.sample(n - s, rng);
    const ReducedOutlierFunction f(inliers, xi);
    std::vector<cplx> reduced;
    for (const cplx& z : f.zeros())
      if (!hood.contains(2.0 * eps, z)) reduced.push_back(z);
    std::vector<cplx> aberth;
    for (const cplx& w : critical_points(make_polynomial(inliers, xi)).expanded())
      if (!hood.contains(2.0 * eps, w)) aberth.push_back(w);
    if (reduced.size() != aberth.size()) continue;
    const double d = matched_distance(reduced, aberth);
    worst = std::max(worst, d);
    if (d < 1e-6) ++good;
  }
  return {good == 20, std::to_string(good) + "/20 instances, max matched distance " + num(worst)};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("critpair_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  nlohmann::json cfg = {{"experiment", "pairing"},
                        {"measure", {{"kind", "circle"}, {"center", {0, 0}}, {"radius", 1}}},
                        {"n_values", {101, 203}},
                        {"xi", {{"kind", "list"}, {"values", {{1.5, 0}, {-0.2, 1.7}}}}},
                        {"trials", 12},
                        {"base_seed", 13},
                        {"plot", true},
                        {"output_dir", (root / "unused").string()}};
  fs::create_directories(root);
  const fs::path config = root / "config.json";
  std::ofstream(config) << cfg.dump(2);

  const std::vector<const char*> threads = {"1", "2", "4", nullptr};
  std::vector<std::string> outputs;
  std::ostringstream err;
  for (std::size_t i = 0; i < threads.size(); ++i) {
    if (threads[i]) setenv("CRITPAIR_THREADS", threads[i], 1);
    else unsetenv("CRITPAIR_THREADS");
    const fs::path dir = root / ("run" + std::to_string(i));
    if (cmd_run(config.string(), dir.string(), err) != kExitOk && !fs::exists(dir / "results.csv"))
      return {false, "run failed: " + err.str()};
    std::string all;
    for (const char* f : {"results.csv", "summary.json", "pairing.json", "trial_0_n101.svg", "trial_0_n203.svg"})
      all += read_file(dir / f) + '\x1f';
    outputs.push_back(all);
  }
  unsetenv("CRITPAIR_THREADS");
  bool same = true;
  for (const auto& o : outputs) same = same && o == outputs[0];
  fs::remove_all(root);
  return {same && outputs[0].size() > 100, same ? "identical across 1, 2, 4 and default workers" : "outputs differ"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double time_limit;  // seconds; 0 for none
  };
  const std::vector<Criterion> criteria = {
      {"companion identity", companion_identity, 5.0},
      {"solver vs eigenvalue oracle", solver_oracle, 30.0},
      {"roots of unity cluster at 0", roots_of_unity_cluster, 0.0},
      {"no outliers, circle n=200", no_outliers, 120.0},
      {"pairing replica, one root at 1.5", fig2_pairing, 60.0},
      {"pairing replica, three roots", fig3_pairing, 0.0},
      {"two circles interior point", two_circles, 0.0},
      {"no critical points in |z| <= 3/4", counterexample, 0.0},
      {"concentration rate", concentration, 180.0},
      {"weak convergence and sharpness", weak_convergence, 0.0},
      {"net covering and cardinality", nets, 0.0},
      {"reduced outlier function", reduced_outliers, 0.0},
      {"determinism across worker counts", determinism, 0.0},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0 && secs > c.time_limit) {
      o.pass = false;
      o.detail += ", over the " + num(c.time_limit) + " s limit";
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
