#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "critpair/experiments.hpp"
#include "critpair/measure.hpp"
#include "critpair/polyroots.hpp"
#include "critpair/stats.hpp"

namespace critpair {

/// Malformed input file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal form that parses back to the same double ("nan", "inf"
/// and "-inf" for non-finite values).
std::string format_double(double x);
/// Throws ParseError unless the whole string is a number.
double parse_double(const std::string& text);

/// Rows "re,im" after an optional "re,im" header; blank lines are skipped.
std::vector<cplx> read_roots_csv(std::istream& in);
std::vector<cplx> read_roots_csv(const std::string& path);
void write_roots_csv(std::ostream& out, const std::vector<cplx>& roots);

/// Header "re,im,multiplicity,residual".
void write_critpts_csv(std::ostream& out, const CriticalPointSet& set);
CriticalPointSet read_critpts_csv(std::istream& in);
CriticalPointSet read_critpts_csv(const std::string& path);

/// Header "n,trial,seed,status" followed by the campaign's columns.
void write_results_csv(std::ostream& out, const CampaignResult& result);
/// Header "n,seed,sup_error".
void write_sweep_csv(std::ostream& out, const ConcentrationSweep& sweep);

nlohmann::json to_json(cplx z);
/// Expects [re, im]; throws ConfigError otherwise.
cplx complex_from_json(const nlohmann::json& j);

/// Measure record, e.g. {"kind": "circle", "center": [0, 0], "radius": 1}.
nlohmann::json to_json(const Measure& mu);
/// Throws ConfigError on unknown kinds, unknown keys or bad values.
Measure measure_from_json(const nlohmann::json& j);

nlohmann::json summary_json(const Campaign& campaign, const CampaignResult& result);
nlohmann::json pairing_json(const std::vector<PairingReport>& reports);
/// Plot input: experiment, measure, n, roots, xi, critical_points, outliers.
nlohmann::json snapshot_json(const Campaign& campaign, const TrialSnapshot& snapshot);

/// Writes text to path, replacing the file; throws std::runtime_error on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace critpair
