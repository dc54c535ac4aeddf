#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "critpair/errors.hpp"
#include "critpair/experiments.hpp"
#include "critpair/io.hpp"
#include "support.hpp"

using namespace critpair;
using testing_support::matched_distance;

namespace {

Campaign pairing(std::vector<cplx> xi, std::size_t n, std::size_t trials) {
  Campaign c;
  c.kind = ExperimentKind::Pairing;
  c.n_values = {n};
  c.k_rule = {KRule::Kind::Constant, static_cast<double>(xi.size())};
  c.xi.values = std::move(xi);
  c.trials = trials;
  c.base_seed = 5;
  return c;
}

std::string results_csv(const CampaignResult& r) {
  std::ostringstream out;
  write_results_csv(out, r);
  return out.str();
}

std::size_t count_status(const CampaignResult& r, TrialStatus s) {
  return static_cast<std::size_t>(
      std::count_if(r.records.begin(), r.records.end(), [&](const TrialRecord& t) { return t.status == s; }));
}

}  // namespace

TEST_CASE("kind names round-trip") {
  for (auto k : {ExperimentKind::NoOutliers, ExperimentKind::Pairing, ExperimentKind::TwoCirclesInterior,
                 ExperimentKind::Convergence, ExperimentKind::Sharpness, ExperimentKind::GrowingXi})
    CHECK(parse_experiment_kind(to_string(k)) == k);
  CHECK(to_string(ExperimentKind::TwoCirclesInterior) == "two_circles_interior");
  CHECK_THROWS_AS(parse_experiment_kind("pairings"), ConfigError);
  CHECK(to_string(TrialStatus::SolverFailure) == "solver_failure");
}

TEST_CASE("k and xi rules") {
  CHECK(KRule{KRule::Kind::Constant, 3.0}.count(100) == 3);
  CHECK(KRule{KRule::Kind::FloorPow, 0.5}.count(200) == 14);
  CHECK(KRule{KRule::Kind::FloorPow, 0.5}.count(10000) == 100);
  CHECK(KRule{KRule::Kind::CeilFrac, 0.3}.count(1000) == 300);
  CHECK(KRule{KRule::Kind::CeilFrac, 0.3}.count(101) == 31);

  XiRule list{XiRule::Kind::List, {1.5, cplx(0.0, 2.0)}, 0.0};
  CHECK(list.generate(50, 2) == std::vector<cplx>{1.5, cplx(0.0, 2.0)});
  CHECK_THROWS(list.generate(50, 3));
  XiRule rep{XiRule::Kind::Repeat, {3.0}, 0.0};
  CHECK(rep.generate(10, 4) == std::vector<cplx>(4, 3.0));
  XiRule power{XiRule::Kind::Power, {cplx(2.0, 0.0)}, 0.5};
  const auto g = power.generate(100, 1);
  REQUIRE(g.size() == 1);
  CHECK(std::abs(g[0] - 20.0) < 1e-12);
}

TEST_CASE("validation") {
  Campaign c;
  c.n_values = {200};
  CHECK_NOTHROW(validate(c));

  Campaign bad = c;
  bad.trials = 0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.n_values = {1};
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.n_values = {};
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.k_rule = {KRule::Kind::Constant, 1.0};
  bad.xi.values = {2.0};
  CHECK_THROWS_AS(validate(bad), ConfigError);

  // 1 + i is at distance 0.414 from the circle: inside N(3 eps) \ N(eps) for eps = 0.15.
  CHECK_THROWS_AS(validate(pairing({cplx(1.0, 1.0)}, 203, 1)), ConfigError);
  auto ok = pairing({cplx(1.0, 1.0)}, 203, 1);
  ok.epsilon = 0.075;
  CHECK_NOTHROW(validate(ok));
  CHECK_NOTHROW(validate(pairing({1.5}, 101, 1)));
  CHECK_NOTHROW(validate(pairing({1.05}, 101, 1)));
  auto many = pairing({1.5}, 10, 1);
  many.k_rule.value = 10.0;
  many.xi.kind = XiRule::Kind::Repeat;
  CHECK_THROWS_AS(validate(many), ConfigError);

  Campaign conv;
  conv.kind = ExperimentKind::Convergence;
  conv.n_values = {200};
  conv.k_rule = {KRule::Kind::CeilFrac, 0.3};
  conv.xi = {XiRule::Kind::Repeat, {0.0}, 0.0};
  CHECK_THROWS_AS(validate(conv), ConfigError);
  conv.kind = ExperimentKind::Sharpness;
  CHECK_NOTHROW(validate(conv));
  conv.k_rule = {KRule::Kind::FloorPow, 1.0};
  conv.kind = ExperimentKind::Convergence;
  CHECK_THROWS_AS(validate(conv), ConfigError);

  Campaign two;
  two.kind = ExperimentKind::TwoCirclesInterior;
  two.n_values = {200};
  CHECK_THROWS_AS(validate(two), ConfigError);
  two.measure = Measure::two_circles();
  CHECK_NOTHROW(validate(two));

  Campaign grow;
  grow.kind = ExperimentKind::GrowingXi;
  grow.n_values = {100};
  CHECK_THROWS_AS(validate(grow), ConfigError);

  CHECK(default_threshold(ExperimentKind::NoOutliers) == 0.99);
  CHECK(default_threshold(ExperimentKind::Pairing) == 0.95);
}

TEST_CASE("no outliers for the circle at n = 200") {
  Campaign c;
  c.n_values = {200};
  c.trials = 20;
  const auto r = run_no_outliers(c);
  REQUIRE(r.records.size() == 20);
  CHECK(r.columns == std::vector<std::string>{"count_outside"});
  CHECK(count_status(r, TrialStatus::Success) >= 19);
  CHECK(r.summary.solver_failure_rate == 0.0);
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    CHECK(r.records[i].trial == i);
    CHECK(r.records[i].seed == derive_seed(c.base_seed, 200, i));
  }
}

TEST_CASE("a point mass never has outliers") {
  Campaign c;
  c.measure = Measure::degenerate({0.5, -0.5});
  c.n_values = {20, 60};
  c.trials = 3;
  const auto r = run_no_outliers(c);
  for (const auto& rec : r.records) {
    CHECK(rec.status == TrialStatus::Success);
    CHECK(rec.values[0] == 0.0);
  }
  CHECK(r.summary.threshold_met);
}

TEST_CASE("pairing: one deterministic root outside the circle") {
  const auto c = pairing({1.5}, 201, 20);
  const auto r = run_pairing(c);
  REQUIRE(r.pairing.size() == 20);
  CHECK(count_status(r, TrialStatus::Success) >= 19);
  std::size_t within = 0;
  const Neighborhood hood(c.measure);
  for (std::size_t t = 0; t < r.pairing.size(); ++t) {
    const auto& rep = r.pairing[t];
    CHECK(rep.outliers.size() <= 1);
    for (const cplx& w : rep.outliers) CHECK_FALSE(hood.contains(2.0 * c.epsilon, w));
    within += r.records[t].values[3] == 1.0 ? 1 : 0;
  }
  CHECK(within >= 19);
}

TEST_CASE("pairing: deterministic roots on the support give no outliers") {
  auto c = pairing({1.0, cplx(0.0, -1.0)}, 200, 20);
  const auto r = run_pairing(c);
  std::size_t clean = 0;
  for (const auto& rep : r.pairing) {
    CHECK(rep.matching.empty());
    clean += rep.outliers.empty() ? 1 : 0;
  }
  CHECK(clean >= 19);
}

TEST_CASE("pairing: three roots, matched distance shrinks") {
  auto c = pairing({cplx(1.0, 1.0), 1.5, cplx(1.2, 0.3)}, 203, 20);
  c.epsilon = 0.075;
  c.n_values = {203, 812};
  const auto r = run_pairing(c);
  CHECK(r.summary.per_degree.size() == 2);
  CHECK(r.summary.per_degree[0].successes >= 19);
  CHECK(r.summary.medians_decreasing);
  for (const auto& rep : r.pairing) {
    if (rep.outliers.size() != 3) continue;
    // One-to-one.
    std::vector<int> seen(3, 0);
    for (const Match& m : rep.matching) CHECK(seen[m.outlier_index]++ == 0);
  }
}

TEST_CASE("pairing on the blob") {
  const std::vector<cplx> blob = blob_polygon();
  auto c = pairing({cplx(-0.8, -0.8)}, 100, 20);
  c.measure = Measure::uniform_region(blob);
  c.epsilon = 0.1;
  const auto r = run_pairing(c);
  std::size_t within = 0;
  for (const auto& rec : r.records) within += rec.values[3] == 1.0 ? 1 : 0;
  CHECK(within >= 18);
}

TEST_CASE("translating the measure and xi translates the outliers") {
  const cplx a(2.0, -1.0);
  auto c = pairing({1.5, cplx(0.0, 1.6)}, 120, 4);
  auto t = c;
  t.measure = c.measure.translated(a);
  for (auto& x : t.xi.values) x += a;
  const auto r = run_pairing(c), s = run_pairing(t);
  REQUIRE(r.pairing.size() == s.pairing.size());
  for (std::size_t i = 0; i < r.pairing.size(); ++i) {
    auto shifted = r.pairing[i].outliers;
    for (auto& w : shifted) w += a;
    REQUIRE(shifted.size() == s.pairing[i].outliers.size());
    CHECK(matched_distance(shifted, s.pairing[i].outliers) < 1e-8);
  }
}

TEST_CASE("two circles: a single interior critical point") {
  Campaign c;
  c.kind = ExperimentKind::TwoCirclesInterior;
  c.measure = Measure::two_circles();
  c.epsilon = 0.2;
  c.n_values = {200};
  c.trials = 20;
  const auto r = run_two_circles_interior(c);
  CHECK(count_status(r, TrialStatus::Success) >= 19);
}

TEST_CASE("two circles, n = 4: symmetric samples put the interior point at 0") {
  const double t = 0.7, u = 2.1;
  const cplx e1 = std::polar(1.0, t), e2 = std::polar(1.0, u);
  const std::vector<cplx> roots = {2.5 + e1, -2.5 - e1, 2.5 + e2, -2.5 - e2};
  const auto cp = critical_points(make_polynomial(roots)).expanded();
  std::vector<cplx> inner;
  for (const cplx& w : cp)
    if (std::abs(w) < 1.2) inner.push_back(w);
  REQUIRE(inner.size() == 1);
  CHECK(std::abs(inner[0]) < 1e-12);
}

TEST_CASE("convergence and sharpness") {
  Campaign c;
  c.kind = ExperimentKind::Convergence;
  c.n_values = {100, 800};
  c.k_rule = {KRule::Kind::FloorPow, 0.5};
  c.xi = {XiRule::Kind::Repeat, {3.0}, 0.0};
  c.trials = 5;
  const auto r = run_convergence(c);
  CHECK(r.summary.medians_decreasing);

  Campaign s;
  s.kind = ExperimentKind::Sharpness;
  s.n_values = {1000};
  s.k_rule = {KRule::Kind::CeilFrac, 0.3};
  s.xi = {XiRule::Kind::Repeat, {0.0}, 0.0};
  s.trials = 3;
  const auto q = run_sharpness(s);
  for (const auto& rec : q.records) {
    CHECK(rec.status == TrialStatus::Success);
    CHECK(rec.values[0] > 0.05);
    CHECK(rec.values[1] >= 0.15);
  }
}

TEST_CASE("growing xi: relative error falls like 1/n") {
  Campaign c;
  c.kind = ExperimentKind::GrowingXi;
  c.n_values = {100, 400, 1600};
  c.k_rule = {KRule::Kind::Constant, 1.0};
  c.xi = {XiRule::Kind::Power, {cplx(2.0, 0.0)}, 0.4};
  c.trials = 4;
  const auto r = run_growing_xi(c);
  CHECK(r.summary.relative_error_slope < -0.7);
  CHECK(std::isfinite(r.summary.fitted_constant));
  for (const auto& rec : r.records) CHECK(rec.values[2] * static_cast<double>(rec.n) <= r.summary.fitted_constant);
}

TEST_CASE("results do not depend on the worker count") {
  auto c = pairing({1.5, cplx(-0.3, 1.8)}, 150, 6);
  c.n_values = {80, 150};
  c.keep_snapshots = true;
  setenv("CRITPAIR_THREADS", "1", 1);
  const auto one = run_campaign(c);
  setenv("CRITPAIR_THREADS", "3", 1);
  const auto three = run_campaign(c);
  unsetenv("CRITPAIR_THREADS");
  const auto any = run_campaign(c);
  CHECK(results_csv(one) == results_csv(three));
  CHECK(results_csv(one) == results_csv(any));
  CHECK(pairing_json(one.pairing).dump() == pairing_json(three.pairing).dump());
  REQUIRE(one.snapshots.size() == 2);
  CHECK(one.snapshots[1].critical_points == three.snapshots[1].critical_points);
}

TEST_CASE("results CSV layout") {
  const auto r = run_pairing(pairing({1.5}, 50, 2));
  std::istringstream in(results_csv(r));
  std::string header;
  std::getline(in, header);
  CHECK(header == "n,trial,seed,status,outliers,s,max_distance,within_radius");
}
