#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "critpair/measure.hpp"

namespace critpair {

enum class ExperimentKind { NoOutliers, Pairing, TwoCirclesInterior, Convergence, Sharpness, GrowingXi };

std::string to_string(ExperimentKind kind);
/// Inverse of to_string; throws ConfigError for an unknown name.
ExperimentKind parse_experiment_kind(const std::string& name);

/// Number of deterministic roots at degree n.
struct KRule {
  enum class Kind { Constant, FloorPow, CeilFrac };
  Kind kind = Kind::Constant;
  /// Count for Constant, exponent for FloorPow (floor(n^a)), fraction for
  /// CeilFrac (ceil(a n)).
  double value = 0.0;

  std::size_t count(std::size_t n) const;
};

/// Deterministic roots at degree n given their count k.
struct XiRule {
  enum class Kind { List, Repeat, Power };
  Kind kind = Kind::List;
  /// List: the roots themselves (k must equal their number). Repeat: values[0]
  /// k times. Power: k copies of values[0] * n^exponent.
  std::vector<cplx> values;
  double exponent = 0.0;

  std::vector<cplx> generate(std::size_t n, std::size_t k) const;
};

struct Campaign {
  ExperimentKind kind = ExperimentKind::NoOutliers;
  Measure measure = Measure::uniform_circle({0.0, 0.0}, 1.0);
  std::vector<std::size_t> n_values;
  KRule k_rule;
  XiRule xi;
  double epsilon = 0.15;
  std::size_t trials = 1;
  std::uint64_t base_seed = 1;
  /// Minimum success rate; 0 selects the default of the kind.
  double threshold = 0.0;
  /// Keep roots and critical points of trial 0 at every n.
  bool keep_snapshots = false;
};

/// Throws ConfigError when the campaign cannot be run as stated, including
/// deterministic roots in N_mu(3 eps) \ N_mu(eps) for pairing campaigns.
void validate(const Campaign& campaign);

double default_threshold(ExperimentKind kind);

enum class TrialStatus { Success, Falsified, SolverFailure };

std::string to_string(TrialStatus status);

struct TrialRecord {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  TrialStatus status = TrialStatus::Success;
  /// One entry per CampaignResult::columns; NaN after a solver failure.
  std::vector<double> values;
};

struct Match {
  std::size_t xi_index = 0;
  std::size_t outlier_index = 0;
  double distance = 0.0;
};

struct PairingReport {
  std::uint64_t trial_seed = 0;
  std::size_t n = 0;
  std::size_t trial = 0;
  std::vector<cplx> xi;
  double epsilon = 0.0;
  /// Critical points (with multiplicity) outside N_mu(2 eps).
  std::vector<cplx> outliers;
  /// Indices into xi; only xi outside N_mu(3 eps) take part.
  std::vector<Match> matching;
  std::size_t unmatched_xi = 0;
  std::size_t unmatched_outliers = 0;
  bool solver_failed = false;
};

struct TrialSnapshot {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::vector<cplx> roots;
  std::vector<cplx> xi;
  std::vector<cplx> critical_points;
  std::vector<cplx> outliers;
};

struct DegreeSummary {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t falsified = 0;
  std::size_t solver_failures = 0;
  /// successes / (trials - solver_failures); NaN when every trial failed.
  double success_rate = 0.0;
  /// Median of the headline column over trials that did not fail.
  double median = 0.0;
};

struct Summary {
  std::string metric;
  double threshold = 0.0;
  std::vector<DegreeSummary> per_degree;
  bool threshold_met = true;
  /// Medians strictly decreasing in n (trivially true for a single n).
  bool medians_decreasing = true;
  double solver_failure_rate = 0.0;
  bool any_falsified = false;
  /// Growing-xi campaigns: max over trials of n |w - xi| / |xi|, and the
  /// log-log slope of the median relative error in n.
  double fitted_constant = 0.0;
  double relative_error_slope = 0.0;
};

struct CampaignResult {
  ExperimentKind kind = ExperimentKind::NoOutliers;
  std::vector<std::string> columns;
  /// Ordered by n (as listed in the campaign), then trial.
  std::vector<TrialRecord> records;
  std::vector<PairingReport> pairing;
  std::vector<TrialSnapshot> snapshots;
  Summary summary;
};

/// Runs any campaign after validate(). Trials run on parallel_for workers;
/// the result does not depend on the worker count.
CampaignResult run_campaign(const Campaign& campaign);

/// Column: count_outside (critical points outside N_mu(eps)).
CampaignResult run_no_outliers(const Campaign& campaign);
/// Columns: outliers, s, max_distance, within_radius (all matches within 4/n).
CampaignResult run_pairing(const Campaign& campaign);
/// Columns: interior_count (in |z - c| < 1 + eps), w_modulus.
CampaignResult run_two_circles_interior(const Campaign& campaign);
/// Column: bl_distance between the critical-point measure and mu.
CampaignResult run_convergence(const Campaign& campaign);
/// Columns: bl_distance, mass_near_xi (within 1e-3 of the first xi).
CampaignResult run_sharpness(const Campaign& campaign);
/// Columns: xi_modulus, distance, relative_error.
CampaignResult run_growing_xi(const Campaign& campaign);

}  // namespace critpair
