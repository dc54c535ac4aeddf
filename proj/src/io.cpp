#include "critpair/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace critpair {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Calls row(fields, line_number) for every data line; a first line equal to
// `header` is skipped.
template <typename F>
void for_each_row(std::istream& in, const std::string& header, F&& row) {
  std::string line;
  std::size_t number = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (first) {
      first = false;
      std::string compact;
      for (char ch : t)
        if (ch != ' ' && ch != '\t') compact += ch;
      if (compact == header) continue;
    }
    row(split_fields(t), number);
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

double number_field(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + " needs '" + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + " must be a number");
  return j.at(key).get<double>();
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  if (t == "nan") return std::nan("");
  if (t == "inf") return INFINITY;
  if (t == "-inf") return -INFINITY;
  double value = 0.0;
  const char* begin = t.data();
  if (!t.empty() && t.front() == '+') ++begin;
  const auto res = std::from_chars(begin, t.data() + t.size(), value);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ParseError("not a number: '" + text + "'");
  return value;
}

std::vector<cplx> read_roots_csv(std::istream& in) {
  std::vector<cplx> roots;
  for_each_row(in, "re,im", [&](const std::vector<std::string>& f, std::size_t line) {
    if (f.size() != 2) throw ParseError("line " + std::to_string(line) + ": expected re,im");
    try {
      roots.emplace_back(parse_double(f[0]), parse_double(f[1]));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line) + ": " + e.what());
    }
    if (!std::isfinite(roots.back().real()) || !std::isfinite(roots.back().imag()))
      throw ParseError("line " + std::to_string(line) + ": root must be finite");
  });
  return roots;
}

std::vector<cplx> read_roots_csv(const std::string& path) {
  auto in = open_input(path);
  return read_roots_csv(in);
}

void write_roots_csv(std::ostream& out, const std::vector<cplx>& roots) {
  out << "re,im\n";
  for (const cplx& z : roots) out << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
}

void write_critpts_csv(std::ostream& out, const CriticalPointSet& set) {
  out << "re,im,multiplicity,residual\n";
  for (const CriticalPoint& p : set.points)
    out << format_double(p.location.real()) << ',' << format_double(p.location.imag()) << ',' << p.multiplicity
        << ',' << format_double(p.residual) << '\n';
}

CriticalPointSet read_critpts_csv(std::istream& in) {
  CriticalPointSet set;
  for_each_row(in, "re,im,multiplicity,residual", [&](const std::vector<std::string>& f, std::size_t line) {
    if (f.size() != 4) throw ParseError("line " + std::to_string(line) + ": expected re,im,multiplicity,residual");
    CriticalPoint p;
    try {
      p.location = {parse_double(f[0]), parse_double(f[1])};
      const double m = parse_double(f[2]);
      if (!(m >= 1.0) || m != std::floor(m) || m > 1e9) throw ParseError("bad multiplicity '" + f[2] + "'");
      p.multiplicity = static_cast<int>(m);
      p.residual = parse_double(f[3]);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line) + ": " + e.what());
    }
    set.points.push_back(p);
  });
  return set;
}

CriticalPointSet read_critpts_csv(const std::string& path) {
  auto in = open_input(path);
  return read_critpts_csv(in);
}

void write_results_csv(std::ostream& out, const CampaignResult& result) {
  out << "n,trial,seed,status";
  for (const auto& c : result.columns) out << ',' << c;
  out << '\n';
  for (const TrialRecord& r : result.records) {
    out << r.n << ',' << r.trial << ',' << r.seed << ',' << to_string(r.status);
    for (double v : r.values) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const ConcentrationSweep& sweep) {
  out << "n,seed,sup_error\n";
  for (std::size_t i = 0; i < sweep.n_values.size(); ++i)
    for (std::size_t s = 0; s < sweep.seeds; ++s)
      out << sweep.n_values[i] << ',' << s << ',' << format_double(sweep.sup_errors[i][s]) << '\n';
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError("complex numbers are written [re, im]");
  const cplx z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ConfigError("complex number must be finite");
  return z;
}

json to_json(const Measure& mu) {
  switch (mu.kind()) {
    case MeasureKind::UniformCircle:
      return {{"kind", "circle"}, {"center", to_json(mu.center())}, {"radius", mu.radius()}};
    case MeasureKind::TwoCircles:
      return {{"kind", "two_circles"}, {"center", to_json(mu.center())}};
    case MeasureKind::UniformDisk:
      return {{"kind", "disk"}, {"center", to_json(mu.center())}, {"radius", mu.radius()}};
    case MeasureKind::UniformRegion: {
      json vertices = json::array();
      for (const cplx& v : mu.polygon()) vertices.push_back(to_json(v));
      return {{"kind", "polygon"}, {"vertices", vertices}};
    }
    case MeasureKind::Atomic: {
      json atoms = json::array();
      for (const Atom& a : mu.atoms()) atoms.push_back({{"point", to_json(a.point)}, {"weight", a.weight}});
      return {{"kind", "atomic"}, {"atoms", atoms}};
    }
    case MeasureKind::Degenerate:
      return {{"kind", "degenerate"}, {"point", to_json(mu.center())}};
  }
  return {};
}

Measure measure_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ConfigError("measure needs a string 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "circle" || kind == "disk") {
      check_keys(j, {"kind", "center", "radius"}, "measure");
      const cplx c = j.contains("center") ? complex_from_json(j.at("center")) : cplx{};
      const double r = number_field(j, "radius", "measure");
      return kind == "circle" ? Measure::uniform_circle(c, r) : Measure::uniform_disk(c, r);
    }
    if (kind == "two_circles") {
      check_keys(j, {"kind", "center"}, "measure");
      return Measure::two_circles(j.contains("center") ? complex_from_json(j.at("center")) : cplx{});
    }
    if (kind == "polygon") {
      check_keys(j, {"kind", "vertices"}, "measure");
      if (!j.contains("vertices") || !j.at("vertices").is_array()) throw ConfigError("polygon measure needs 'vertices'");
      std::vector<cplx> vertices;
      for (const auto& v : j.at("vertices")) vertices.push_back(complex_from_json(v));
      return Measure::uniform_region(std::move(vertices));
    }
    if (kind == "blob") {
      check_keys(j, {"kind", "vertices"}, "measure");
      const double count = j.contains("vertices") ? number_field(j, "vertices", "measure") : 64.0;
      if (count < 3 || count > 1e5 || count != std::floor(count)) throw ConfigError("blob vertices must be an integer >= 3");
      return Measure::uniform_region(blob_polygon(static_cast<int>(count)));
    }
    if (kind == "atomic") {
      check_keys(j, {"kind", "atoms"}, "measure");
      if (!j.contains("atoms") || !j.at("atoms").is_array()) throw ConfigError("atomic measure needs 'atoms'");
      std::vector<Atom> atoms;
      for (const auto& a : j.at("atoms")) {
        check_keys(a, {"point", "weight"}, "atom");
        if (!a.contains("point")) throw ConfigError("atom needs 'point'");
        atoms.push_back({complex_from_json(a.at("point")), number_field(a, "weight", "atom")});
      }
      return Measure::atomic(std::move(atoms));
    }
    if (kind == "degenerate") {
      check_keys(j, {"kind", "point"}, "measure");
      if (!j.contains("point")) throw ConfigError("degenerate measure needs 'point'");
      return Measure::degenerate(complex_from_json(j.at("point")));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("measure: ") + e.what());
  }
  throw ConfigError("unknown measure kind '" + kind + "'");
}

json summary_json(const Campaign& campaign, const CampaignResult& result) {
  const Summary& s = result.summary;
  json per = json::array();
  for (const DegreeSummary& d : s.per_degree) {
    per.push_back({{"n", d.n},
                   {"trials", d.trials},
                   {"successes", d.successes},
                   {"falsified", d.falsified},
                   {"solver_failures", d.solver_failures},
                   {"success_rate", std::isnan(d.success_rate) ? json(nullptr) : json(d.success_rate)},
                   {"median", std::isnan(d.median) ? json(nullptr) : json(d.median)}});
  }
  json out = {{"experiment", to_string(campaign.kind)},
              {"measure", to_json(campaign.measure)},
              {"epsilon", campaign.epsilon},
              {"base_seed", campaign.base_seed},
              {"metric", s.metric},
              {"threshold", s.threshold},
              {"threshold_met", s.threshold_met},
              {"medians_decreasing", s.medians_decreasing},
              {"any_falsified", s.any_falsified},
              {"solver_failure_rate", s.solver_failure_rate},
              {"per_degree", per}};
  if (campaign.kind == ExperimentKind::GrowingXi) {
    out["fitted_constant"] = s.fitted_constant;
    out["relative_error_slope"] = std::isnan(s.relative_error_slope) ? json(nullptr) : json(s.relative_error_slope);
  }
  return out;
}

json pairing_json(const std::vector<PairingReport>& reports) {
  json out = json::array();
  for (const PairingReport& r : reports) {
    json xi = json::array(), outliers = json::array(), matching = json::array();
    for (const cplx& z : r.xi) xi.push_back(to_json(z));
    for (const cplx& z : r.outliers) outliers.push_back(to_json(z));
    for (const Match& m : r.matching)
      matching.push_back({{"xi_index", m.xi_index}, {"outlier_index", m.outlier_index}, {"distance", m.distance}});
    out.push_back({{"n", r.n},
                   {"trial", r.trial},
                   {"seed", r.trial_seed},
                   {"epsilon", r.epsilon},
                   {"solver_failed", r.solver_failed},
                   {"xi", xi},
                   {"outliers", outliers},
                   {"matching", matching},
                   {"unmatched_xi", r.unmatched_xi},
                   {"unmatched_outliers", r.unmatched_outliers}});
  }
  return out;
}

json snapshot_json(const Campaign& campaign, const TrialSnapshot& snap) {
  auto list = [](const std::vector<cplx>& zs) {
    json a = json::array();
    for (const cplx& z : zs) a.push_back(to_json(z));
    return a;
  };
  return {{"experiment", to_string(campaign.kind)},
          {"measure", to_json(campaign.measure)},
          {"epsilon", campaign.epsilon},
          {"n", snap.n},
          {"trial", snap.trial},
          {"roots", list(snap.roots)},
          {"xi", list(snap.xi)},
          {"critical_points", list(snap.critical_points)},
          {"outliers", list(snap.outliers)}};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace critpair
