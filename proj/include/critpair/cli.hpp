#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "critpair/experiments.hpp"
#include "critpair/svg.hpp"

namespace critpair {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitFalsified = 3,
  kExitSolver = 4,
  /// cmd_critpts only: the solver did not converge.
  kExitNoConvergence = 3,
};

struct RunConfig {
  Campaign campaign;
  std::string output_dir;
  bool plot = false;
};

/// Parses and checks a run configuration. Keys: experiment, measure,
/// n_values, trials, output_dir (required); k_rule, xi, epsilon, base_seed,
/// threshold, plot (optional). Unknown keys are rejected with ConfigError.
RunConfig config_from_json(const nlohmann::json& j);

/// Figure for a trial file written by cmd_run: all roots, critical points,
/// support curves and, for pairing runs, a circle of radius 4/n around every
/// deterministic root outside N_mu(3 eps).
FigureSpec figure_from_snapshot(const nlohmann::json& snapshot);

/// Writes results.csv and summary.json (plus pairing.json for pairing runs,
/// and trial_0.json / trial_0.svg per degree when plotting) to output_dir.
/// Exit codes: 2 bad config, 3 a trial falsified or a success threshold
/// missed, 4 more than 5% solver failures.
int cmd_run(const std::string& config_path, const std::optional<std::string>& output_dir,
            std::ostream& err);

struct CritptsOptions {
  bool oracle = false;
  double tol = 1e-12;
  /// Output CSV path; standard output when empty.
  std::string out;
};

/// Exit codes: 2 unreadable input or bad tolerance, 3 solver did not converge.
int cmd_critpts(const std::string& roots_path, const CritptsOptions& options, std::ostream& out,
                std::ostream& err);

struct PlotOptions {
  std::string out_dir = ".";
  /// Roots CSV to draw alongside a critical-point CSV.
  std::string roots;
};

/// Accepts a trial JSON written by cmd_run or a critical-point CSV written by
/// cmd_critpts; writes <stem>.svg into out_dir. Exit code 2 on malformed input.
int cmd_plot(const std::string& input_path, const PlotOptions& options, std::ostream& err);

}  // namespace critpair
