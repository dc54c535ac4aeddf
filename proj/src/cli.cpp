#include "critpair/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "critpair/assignment.hpp"
#include "critpair/cxlinalg.hpp"
#include "critpair/io.hpp"
#include "critpair/polyroots.hpp"

namespace critpair {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

std::uint64_t unsigned_field(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) throw ConfigError(key + " must be non-negative");
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw ConfigError(key + " must be a non-negative integer");
}

double number_field(const json& j, const std::string& key) {
  if (!j.at(key).is_number()) throw ConfigError(key + " must be a number");
  return j.at(key).get<double>();
}

KRule k_rule_from_json(const json& j) {
  check_keys(j, {"kind", "value"}, "k_rule");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError("k_rule needs a string 'kind'");
  if (!j.contains("value")) throw ConfigError("k_rule needs 'value'");
  KRule rule;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") rule.kind = KRule::Kind::Constant;
  else if (kind == "floor_pow") rule.kind = KRule::Kind::FloorPow;
  else if (kind == "ceil_frac") rule.kind = KRule::Kind::CeilFrac;
  else throw ConfigError("unknown k_rule kind '" + kind + "'");
  rule.value = number_field(j, "value");
  return rule;
}

XiRule xi_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) throw ConfigError("xi needs a string 'kind'");
  XiRule rule;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "list") {
    check_keys(j, {"kind", "values"}, "xi");
    if (!j.contains("values") || !j.at("values").is_array()) throw ConfigError("xi list needs 'values'");
    rule.kind = XiRule::Kind::List;
    for (const auto& v : j.at("values")) rule.values.push_back(complex_from_json(v));
  } else if (kind == "repeat" || kind == "power") {
    check_keys(j, kind == "repeat" ? std::set<std::string>{"kind", "value"} : std::set<std::string>{"kind", "value", "exponent"}, "xi");
    if (!j.contains("value")) throw ConfigError("xi " + kind + " needs 'value'");
    rule.kind = kind == "repeat" ? XiRule::Kind::Repeat : XiRule::Kind::Power;
    rule.values.push_back(complex_from_json(j.at("value")));
    if (kind == "power") {
      if (!j.contains("exponent")) throw ConfigError("xi power needs 'exponent'");
      rule.exponent = number_field(j, "exponent");
    }
  } else {
    throw ConfigError("unknown xi kind '" + kind + "'");
  }
  return rule;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string snapshot_stem(const Campaign& c, const TrialSnapshot& s) {
  std::string stem = "trial_" + std::to_string(s.trial);
  if (c.n_values.size() > 1) stem += "_n" + std::to_string(s.n);
  return stem;
}

std::vector<cplx> complex_list(const json& j, const std::string& key) {
  std::vector<cplx> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) throw ParseError("'" + key + "' must be a list");
  for (const auto& z : j.at(key)) out.push_back(complex_from_json(z));
  return out;
}

}  // namespace

RunConfig config_from_json(const json& j) {
  check_keys(j, {"experiment", "measure", "n_values", "k_rule", "xi", "epsilon", "trials", "base_seed", "output_dir",
                 "plot", "threshold"},
             "config");
  for (const char* key : {"experiment", "measure", "n_values", "trials", "output_dir"})
    if (!j.contains(key)) throw ConfigError(std::string("config needs '") + key + "'");

  RunConfig rc;
  Campaign& c = rc.campaign;
  if (!j.at("experiment").is_string()) throw ConfigError("experiment must be a string");
  c.kind = parse_experiment_kind(j.at("experiment").get<std::string>());
  c.measure = measure_from_json(j.at("measure"));

  if (!j.at("n_values").is_array()) throw ConfigError("n_values must be a list");
  for (const auto& n : j.at("n_values")) {
    if (!n.is_number_integer() || n.get<std::int64_t>() < 0) throw ConfigError("n_values must be non-negative integers");
    c.n_values.push_back(static_cast<std::size_t>(n.get<std::int64_t>()));
  }
  c.trials = static_cast<std::size_t>(unsigned_field(j, "trials"));
  if (!j.at("output_dir").is_string() || j.at("output_dir").get<std::string>().empty())
    throw ConfigError("output_dir must be a non-empty string");
  rc.output_dir = j.at("output_dir").get<std::string>();

  if (j.contains("xi")) c.xi = xi_from_json(j.at("xi"));
  if (j.contains("k_rule")) {
    c.k_rule = k_rule_from_json(j.at("k_rule"));
  } else {
    c.k_rule = {KRule::Kind::Constant, c.xi.kind == XiRule::Kind::List ? static_cast<double>(c.xi.values.size()) : 0.0};
  }
  if (j.contains("epsilon")) c.epsilon = number_field(j, "epsilon");
  if (j.contains("base_seed")) c.base_seed = unsigned_field(j, "base_seed");
  if (j.contains("threshold")) c.threshold = number_field(j, "threshold");
  if (j.contains("plot")) {
    if (!j.at("plot").is_boolean()) throw ConfigError("plot must be true or false");
    rc.plot = j.at("plot").get<bool>();
  }
  c.keep_snapshots = rc.plot;
  validate(c);
  return rc;
}

FigureSpec figure_from_snapshot(const json& snap) {
  if (!snap.is_object()) throw ParseError("trial file must be a JSON object");
  FigureSpec spec;
  try {
    spec.roots = complex_list(snap, "roots");
    const std::vector<cplx> xi = complex_list(snap, "xi");
    spec.roots.insert(spec.roots.end(), xi.begin(), xi.end());
    spec.critical_points = complex_list(snap, "critical_points");
    if (snap.contains("measure")) {
      const Measure mu = measure_from_json(snap.at("measure"));
      spec.support = support_curves(mu);
      const bool pairing = snap.value("experiment", std::string()) == "pairing";
      if (pairing && !xi.empty()) {
        if (!snap.contains("n") || !snap.at("n").is_number_unsigned() || snap.at("n").get<std::uint64_t>() == 0)
          throw ParseError("pairing trial file needs a positive 'n'");
        if (!snap.contains("epsilon") || !snap.at("epsilon").is_number()) throw ParseError("pairing trial file needs 'epsilon'");
        const double eps = snap.at("epsilon").get<double>();
        const Neighborhood hood(mu);
        for (const cplx& x : xi)
          if (hood.distance(x) >= 3.0 * eps) spec.pairing_centers.push_back(x);
        spec.pairing_radius = 4.0 / static_cast<double>(snap.at("n").get<std::uint64_t>());
      }
    }
  } catch (const ConfigError& e) {
    throw ParseError(e.what());
  }
  spec.viewport = fit_viewport(spec);
  return spec;
}

int cmd_run(const std::string& config_path, const std::optional<std::string>& output_dir, std::ostream& err) {
  RunConfig rc;
  try {
    rc = config_from_json(read_json_file(config_path));
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (output_dir) rc.output_dir = *output_dir;

  const CampaignResult result = run_campaign(rc.campaign);
  const fs::path dir(rc.output_dir);
  fs::create_directories(dir);

  std::ostringstream csv;
  write_results_csv(csv, result);
  write_text_file((dir / "results.csv").string(), csv.str());
  write_text_file((dir / "summary.json").string(), summary_json(rc.campaign, result).dump(2) + "\n");
  if (rc.campaign.kind == ExperimentKind::Pairing)
    write_text_file((dir / "pairing.json").string(), pairing_json(result.pairing).dump(2) + "\n");
  for (const TrialSnapshot& snap : result.snapshots) {
    const json j = snapshot_json(rc.campaign, snap);
    const std::string stem = snapshot_stem(rc.campaign, snap);
    write_text_file((dir / (stem + ".json")).string(), j.dump() + "\n");
    write_text_file((dir / (stem + ".svg")).string(), render_svg(figure_from_snapshot(j)));
  }

  const Summary& s = result.summary;
  if (s.solver_failure_rate > 0.05) {
    err << "solver failures in " << s.solver_failure_rate * 100.0 << "% of trials\n";
    return kExitSolver;
  }
  if (s.any_falsified || !s.threshold_met) {
    for (const DegreeSummary& d : s.per_degree)
      if (d.falsified > 0) err << "n=" << d.n << ": " << d.falsified << " of " << d.trials << " trials falsified\n";
    if (!s.threshold_met) err << "success rate below threshold " << s.threshold << '\n';
    return kExitFalsified;
  }
  return kExitOk;
}

int cmd_critpts(const std::string& roots_path, const CritptsOptions& options, std::ostream& out, std::ostream& err) {
  std::vector<cplx> roots;
  try {
    roots = read_roots_csv(roots_path);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (roots.empty()) {
    err << "parse error: no roots in " << roots_path << '\n';
    return kExitConfig;
  }
  if (!(options.tol >= 1e-14 && options.tol <= 1e-6)) {
    err << "tolerance must lie in [1e-14, 1e-6]\n";
    return kExitConfig;
  }

  const RootedPolynomial poly = make_polynomial(roots);
  CriticalPointSet set;
  try {
    set = critical_points(poly, options.tol);
  } catch (const ConvergenceError& e) {
    err << "solver did not converge: " << e.what() << '\n';
    return kExitNoConvergence;
  }

  if (options.out.empty()) {
    write_critpts_csv(out, set);
  } else {
    std::ostringstream csv;
    write_critpts_csv(csv, set);
    write_text_file(options.out, csv.str());
  }

  if (options.oracle) {
    if (roots.size() > 200) {
      err << "oracle skipped: n = " << roots.size() << " > 200\n";
    } else if (roots.size() >= 2) {
      std::vector<cplx> eig = eigenvalues(companion_matrix(roots));
      // Drop the structural zero eigenvalue.
      std::size_t zero = 0;
      for (std::size_t i = 1; i < eig.size(); ++i)
        if (std::abs(eig[i]) < std::abs(eig[zero])) zero = i;
      eig.erase(eig.begin() + static_cast<std::ptrdiff_t>(zero));
      const std::vector<cplx> mine = set.expanded();
      CostMatrix cost(mine.size(), std::vector<double>(eig.size()));
      for (std::size_t i = 0; i < mine.size(); ++i)
        for (std::size_t j = 0; j < eig.size(); ++j) cost[i][j] = std::abs(mine[i] - eig[j]);
      const Assignment a = optimal_assignment(cost);
      double worst = 0.0;
      for (std::size_t i = 0; i < mine.size(); ++i)
        if (a.row_to_col[i] >= 0) worst = std::max(worst, cost[i][static_cast<std::size_t>(a.row_to_col[i])]);
      err << "oracle max distance: " << format_double(worst) << '\n';
    }
  }
  return kExitOk;
}

int cmd_plot(const std::string& input_path, const PlotOptions& options, std::ostream& err) {
  FigureSpec spec;
  try {
    const fs::path in(input_path);
    if (in.extension() == ".json") {
      spec = figure_from_snapshot(read_json_file(input_path));
    } else {
      for (const cplx& z : read_critpts_csv(input_path).expanded()) spec.critical_points.push_back(z);
      if (!options.roots.empty()) spec.roots = read_roots_csv(options.roots);
      spec.viewport = fit_viewport(spec);
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitConfig;
  }
  const fs::path dir(options.out_dir);
  fs::create_directories(dir);
  const fs::path target = dir / (fs::path(input_path).stem().string() + ".svg");
  write_text_file(target.string(), render_svg(spec));
  return kExitOk;
}

}  // namespace critpair
