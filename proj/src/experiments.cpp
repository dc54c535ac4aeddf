#include "critpair/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "critpair/assignment.hpp"
#include "critpair/parallel.hpp"
#include "critpair/polyroots.hpp"
#include "critpair/rng.hpp"
#include "critpair/stats.hpp"

namespace critpair {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct KindInfo {
  ExperimentKind kind;
  const char* name;
  std::vector<std::string> columns;
  std::size_t headline;
};

const std::vector<KindInfo>& kind_table() {
  static const std::vector<KindInfo> table = {
      {ExperimentKind::NoOutliers, "no_outliers", {"count_outside"}, 0},
      {ExperimentKind::Pairing, "pairing", {"outliers", "s", "max_distance", "within_radius"}, 2},
      {ExperimentKind::TwoCirclesInterior, "two_circles_interior", {"interior_count", "w_modulus"}, 1},
      {ExperimentKind::Convergence, "convergence", {"bl_distance"}, 0},
      {ExperimentKind::Sharpness, "sharpness", {"bl_distance", "mass_near_xi"}, 0},
      {ExperimentKind::GrowingXi, "growing_xi", {"xi_modulus", "distance", "relative_error"}, 2},
  };
  return table;
}

const KindInfo& info(ExperimentKind kind) {
  for (const auto& k : kind_table())
    if (k.kind == kind) return k;
  throw ConfigError("unknown experiment kind");
}

// Everything a trial needs that does not depend on the trial.
struct Shared {
  const Campaign& campaign;
  Neighborhood hood;
  std::optional<EmpiricalMeasure> reference;
};

struct TrialOutput {
  TrialRecord record;
  std::optional<PairingReport> report;
  std::optional<TrialSnapshot> snapshot;
};

std::vector<cplx> outliers_of(const Neighborhood& hood, double radius, const std::vector<cplx>& points) {
  std::vector<cplx> out;
  for (const cplx& w : points)
    if (!hood.contains(radius, w)) out.push_back(w);
  return out;
}

void score_pairing(const Shared& sh, PairingReport& rep, std::vector<double>& values, TrialStatus& status) {
  const double eps = sh.campaign.epsilon;
  std::vector<std::size_t> outside;
  for (std::size_t l = 0; l < rep.xi.size(); ++l)
    if (sh.hood.distance(rep.xi[l]) >= 3.0 * eps) outside.push_back(l);

  double max_distance = 0.0;
  if (!outside.empty() && !rep.outliers.empty()) {
    CostMatrix cost(outside.size(), std::vector<double>(rep.outliers.size()));
    for (std::size_t r = 0; r < outside.size(); ++r)
      for (std::size_t c = 0; c < rep.outliers.size(); ++c)
        cost[r][c] = std::abs(rep.xi[outside[r]] - rep.outliers[c]);
    const Assignment a = optimal_assignment(cost);
    for (std::size_t r = 0; r < outside.size(); ++r) {
      const int c = a.row_to_col[r];
      if (c < 0) continue;
      const double d = cost[r][static_cast<std::size_t>(c)];
      rep.matching.push_back({outside[r], static_cast<std::size_t>(c), d});
      max_distance = std::max(max_distance, d);
    }
  }
  rep.unmatched_xi = outside.size() - rep.matching.size();
  rep.unmatched_outliers = rep.outliers.size() - rep.matching.size();

  const double radius = 4.0 / static_cast<double>(rep.n);
  bool within = rep.outliers.size() == outside.size();
  for (const Match& m : rep.matching) within = within && m.distance <= radius;
  values = {static_cast<double>(rep.outliers.size()), static_cast<double>(outside.size()), max_distance,
            within ? 1.0 : 0.0};
  status = rep.outliers.size() == outside.size() ? TrialStatus::Success : TrialStatus::Falsified;
}

TrialOutput run_trial(const Shared& sh, std::size_t n, std::size_t trial) {
  const Campaign& c = sh.campaign;
  TrialOutput out;
  TrialRecord& rec = out.record;
  rec.n = n;
  rec.trial = trial;
  rec.seed = derive_seed(c.base_seed, n, trial);

  const std::size_t k = c.k_rule.count(n);
  Rng rng(rec.seed);
  std::vector<cplx> random = c.measure.sample(n - k, rng);
  std::vector<cplx> xi = c.xi.generate(n, k);
  const RootedPolynomial poly = make_polynomial(std::move(random), xi);

  const std::size_t width = info(c.kind).columns.size();
  std::vector<cplx> crit;
  try {
    crit = critical_points(poly).expanded();
  } catch (const ConvergenceError&) {
    rec.status = TrialStatus::SolverFailure;
    rec.values.assign(width, kNaN);
    if (c.kind == ExperimentKind::Pairing) {
      PairingReport rep;
      rep.trial_seed = rec.seed;
      rep.n = n;
      rep.trial = trial;
      rep.xi = xi;
      rep.epsilon = c.epsilon;
      rep.solver_failed = true;
      out.report = std::move(rep);
    }
    return out;
  }

  std::vector<cplx> outliers;
  switch (c.kind) {
    case ExperimentKind::NoOutliers: {
      const auto outside = outliers_of(sh.hood, c.epsilon, crit);
      rec.values = {static_cast<double>(outside.size())};
      rec.status = outside.empty() ? TrialStatus::Success : TrialStatus::Falsified;
      outliers = outside;
      break;
    }
    case ExperimentKind::Pairing: {
      PairingReport rep;
      rep.trial_seed = rec.seed;
      rep.n = n;
      rep.trial = trial;
      rep.xi = xi;
      rep.epsilon = c.epsilon;
      rep.outliers = outliers_of(sh.hood, 2.0 * c.epsilon, crit);
      score_pairing(sh, rep, rec.values, rec.status);
      outliers = rep.outliers;
      out.report = std::move(rep);
      break;
    }
    case ExperimentKind::TwoCirclesInterior: {
      const cplx center = c.measure.center();
      std::size_t count = 0;
      double modulus = kNaN;
      for (const cplx& w : crit) {
        const double r = std::abs(w - center);
        if (r < 1.0 + c.epsilon) {
          ++count;
          outliers.push_back(w);
          if (!(r >= modulus)) modulus = r;
        }
      }
      rec.values = {static_cast<double>(count), modulus};
      rec.status = count == 1 ? TrialStatus::Success : TrialStatus::Falsified;
      break;
    }
    case ExperimentKind::Convergence: {
      rec.values = {bl_distance(EmpiricalMeasure(crit), *sh.reference)};
      rec.status = TrialStatus::Success;
      break;
    }
    case ExperimentKind::Sharpness: {
      const double bl = bl_distance(EmpiricalMeasure(crit), *sh.reference);
      std::size_t near = 0;
      if (!xi.empty())
        for (const cplx& w : crit) near += std::abs(w - xi.front()) < 1e-3 ? 1 : 0;
      rec.values = {bl, static_cast<double>(near) / static_cast<double>(crit.size())};
      rec.status = bl > 0.05 ? TrialStatus::Success : TrialStatus::Falsified;
      break;
    }
    case ExperimentKind::GrowingXi: {
      outliers = outliers_of(sh.hood, 2.0 * c.epsilon, crit);
      const cplx target = xi.front();
      double distance = kNaN;
      for (const cplx& w : outliers) {
        const double d = std::abs(w - target);
        if (!(d >= distance)) distance = d;
      }
      rec.values = {std::abs(target), distance, distance / std::abs(target)};
      rec.status = outliers.size() == 1 ? TrialStatus::Success : TrialStatus::Falsified;
      break;
    }
  }

  if (c.keep_snapshots && trial == 0) {
    TrialSnapshot snap;
    snap.n = n;
    snap.trial = trial;
    snap.roots = poly.random_roots;
    snap.xi = xi;
    snap.critical_points = std::move(crit);
    snap.outliers = std::move(outliers);
    out.snapshot = std::move(snap);
  }
  return out;
}

Summary summarize(const Campaign& c, const std::vector<TrialRecord>& records) {
  const KindInfo& ki = info(c.kind);
  Summary s;
  s.metric = ki.columns[ki.headline];
  s.threshold = c.threshold > 0.0 ? c.threshold : default_threshold(c.kind);
  std::size_t failures = 0;
  std::vector<double> xs, medians;
  for (std::size_t n : c.n_values) {
    DegreeSummary d;
    d.n = n;
    std::vector<double> column;
    for (const TrialRecord& r : records) {
      if (r.n != n) continue;
      ++d.trials;
      if (r.status == TrialStatus::SolverFailure) {
        ++d.solver_failures;
        continue;
      }
      if (r.status == TrialStatus::Success) ++d.successes;
      else ++d.falsified;
      const double v = r.values[ki.headline];
      if (!std::isnan(v)) column.push_back(v);
    }
    const std::size_t counted = d.trials - d.solver_failures;
    d.success_rate = counted == 0 ? kNaN : static_cast<double>(d.successes) / static_cast<double>(counted);
    d.median = column.empty() ? kNaN : median(column);
    failures += d.solver_failures;
    s.any_falsified = s.any_falsified || d.falsified > 0;
    s.threshold_met = s.threshold_met && !(d.success_rate < s.threshold) && !std::isnan(d.success_rate);
    if (!s.per_degree.empty() && !(d.median < s.per_degree.back().median)) s.medians_decreasing = false;
    xs.push_back(static_cast<double>(n));
    medians.push_back(d.median);
    s.per_degree.push_back(d);
  }
  s.solver_failure_rate = records.empty() ? 0.0 : static_cast<double>(failures) / static_cast<double>(records.size());

  if (c.kind == ExperimentKind::GrowingXi) {
    for (const TrialRecord& r : records)
      if (r.status != TrialStatus::SolverFailure && !std::isnan(r.values[2]))
        s.fitted_constant = std::max(s.fitted_constant, static_cast<double>(r.n) * r.values[2]);
    bool usable = xs.size() >= 2;
    for (double m : medians) usable = usable && m > 0.0;
    s.relative_error_slope = usable ? loglog_slope(xs, medians) : kNaN;
  }
  return s;
}

CampaignResult run_kind(const Campaign& c, ExperimentKind expected) {
  if (c.kind != expected) throw ConfigError("campaign kind is " + to_string(c.kind) + ", expected " + to_string(expected));
  return run_campaign(c);
}

void check_gap(const Campaign& c, const Neighborhood& hood) {
  if (!hood.certified()) throw ConfigError("the zero set of the measure could not be certified; N_mu(eps) is unknown");
  for (std::size_t n : c.n_values) {
    for (const cplx& x : c.xi.generate(n, c.k_rule.count(n))) {
      const double d = hood.distance(x);
      if (d >= c.epsilon && d < 3.0 * c.epsilon)
        throw ConfigError("gap hypothesis violated: deterministic root (" + std::to_string(x.real()) + ", " +
                          std::to_string(x.imag()) + ") lies in N_mu(3 eps) \\ N_mu(eps)");
    }
  }
}

}  // namespace

std::string to_string(ExperimentKind kind) { return info(kind).name; }

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (const auto& k : kind_table())
    if (name == k.name) return k.kind;
  throw ConfigError("unknown experiment kind '" + name + "'");
}

std::string to_string(TrialStatus status) {
  switch (status) {
    case TrialStatus::Success: return "success";
    case TrialStatus::Falsified: return "falsified";
    case TrialStatus::SolverFailure: return "solver_failure";
  }
  return "unknown";
}

std::size_t KRule::count(std::size_t n) const {
  const double x = static_cast<double>(n);
  switch (kind) {
    case Kind::Constant: return static_cast<std::size_t>(value);
    case Kind::FloorPow: return static_cast<std::size_t>(std::floor(std::pow(x, value) + 1e-9));
    case Kind::CeilFrac: return static_cast<std::size_t>(std::ceil(value * x - 1e-9));
  }
  return 0;
}

std::vector<cplx> XiRule::generate(std::size_t n, std::size_t k) const {
  switch (kind) {
    case Kind::List:
      if (values.size() != k) throw ConfigError("xi list has " + std::to_string(values.size()) + " entries but k_n = " + std::to_string(k));
      return values;
    case Kind::Repeat:
      if (k > 0 && values.empty()) throw ConfigError("xi repeat rule needs a value");
      return std::vector<cplx>(k, k > 0 ? values.front() : cplx{});
    case Kind::Power:
      if (k > 0 && values.empty()) throw ConfigError("xi power rule needs a value");
      return std::vector<cplx>(k, k > 0 ? values.front() * std::pow(static_cast<double>(n), exponent) : cplx{});
  }
  return {};
}

double default_threshold(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::NoOutliers: return 0.99;
    case ExperimentKind::TwoCirclesInterior: return 0.99;
    case ExperimentKind::Pairing: return 0.95;
    case ExperimentKind::Sharpness: return 0.95;
    case ExperimentKind::GrowingXi: return 0.95;
    case ExperimentKind::Convergence: return 0.0;
  }
  return 0.0;
}

void validate(const Campaign& c) {
  if (c.trials < 1) throw ConfigError("trials must be at least 1");
  if (c.n_values.empty()) throw ConfigError("n_values must not be empty");
  if (!(c.epsilon > 0.0) || !std::isfinite(c.epsilon)) throw ConfigError("epsilon must be positive");
  if (c.threshold < 0.0 || c.threshold > 1.0) throw ConfigError("threshold must lie in [0, 1]");
  if (!(c.k_rule.value >= 0.0) || !std::isfinite(c.k_rule.value)) throw ConfigError("k_rule value must be non-negative");
  if (c.k_rule.kind == KRule::Kind::Constant && c.k_rule.value != std::floor(c.k_rule.value))
    throw ConfigError("constant k_rule needs an integer count");
  if (c.k_rule.kind == KRule::Kind::FloorPow && c.k_rule.value >= 1.0) throw ConfigError("floor_pow exponent must be below 1");
  if (c.k_rule.kind == KRule::Kind::CeilFrac && c.k_rule.value > 1.0) throw ConfigError("ceil_frac fraction must be at most 1");
  for (std::size_t n : c.n_values) {
    if (n < 2) throw ConfigError("every n must be at least 2");
    const std::size_t k = c.k_rule.count(n);
    if (k >= n) throw ConfigError("k_n must be smaller than n");
    c.xi.generate(n, k);
  }

  switch (c.kind) {
    case ExperimentKind::NoOutliers:
      for (std::size_t n : c.n_values)
        if (c.k_rule.count(n) != 0) throw ConfigError("no_outliers needs k_n = 0");
      break;
    case ExperimentKind::TwoCirclesInterior:
      if (c.measure.kind() != MeasureKind::TwoCircles) throw ConfigError("two_circles_interior needs the two-circles measure");
      break;
    case ExperimentKind::Convergence:
      if (c.k_rule.kind == KRule::Kind::CeilFrac)
        throw ConfigError("ceil_frac k_rule is not o(n); it is reserved for the sharpness experiment");
      break;
    case ExperimentKind::Sharpness:
      for (std::size_t n : c.n_values)
        if (c.k_rule.count(n) == 0) throw ConfigError("sharpness needs k_n > 0");
      break;
    case ExperimentKind::GrowingXi:
      for (std::size_t n : c.n_values)
        if (c.k_rule.count(n) != 1) throw ConfigError("growing_xi needs exactly one deterministic root");
      break;
    case ExperimentKind::Pairing:
      break;
  }
  if (c.kind == ExperimentKind::Pairing || c.kind == ExperimentKind::GrowingXi) check_gap(c, Neighborhood(c.measure));
}

CampaignResult run_campaign(const Campaign& c) {
  validate(c);
  Shared sh{c, Neighborhood(c.measure), std::nullopt};
  if (c.kind == ExperimentKind::Convergence || c.kind == ExperimentKind::Sharpness)
    sh.reference = reference_discretization(c.measure);

  const std::size_t cells = c.n_values.size() * c.trials;
  std::vector<TrialOutput> outputs(cells);
  parallel_for(cells, [&](std::size_t task) {
    outputs[task] = run_trial(sh, c.n_values[task / c.trials], task % c.trials);
  });

  CampaignResult result;
  result.kind = c.kind;
  result.columns = info(c.kind).columns;
  for (TrialOutput& o : outputs) {
    result.records.push_back(std::move(o.record));
    if (o.report) result.pairing.push_back(std::move(*o.report));
    if (o.snapshot) result.snapshots.push_back(std::move(*o.snapshot));
  }
  result.summary = summarize(c, result.records);
  return result;
}

CampaignResult run_no_outliers(const Campaign& c) { return run_kind(c, ExperimentKind::NoOutliers); }
CampaignResult run_pairing(const Campaign& c) { return run_kind(c, ExperimentKind::Pairing); }
CampaignResult run_two_circles_interior(const Campaign& c) { return run_kind(c, ExperimentKind::TwoCirclesInterior); }
CampaignResult run_convergence(const Campaign& c) { return run_kind(c, ExperimentKind::Convergence); }
CampaignResult run_sharpness(const Campaign& c) { return run_kind(c, ExperimentKind::Sharpness); }
CampaignResult run_growing_xi(const Campaign& c) { return run_kind(c, ExperimentKind::GrowingXi); }

}  // namespace critpair
