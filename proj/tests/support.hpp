#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "critpair/assignment.hpp"
#include "critpair/errors.hpp"
#include "critpair/rng.hpp"

namespace testing_support {

using critpair::cplx;

/// Largest distance in an optimal one-to-one matching of two equal-size sets.
inline double matched_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  critpair::CostMatrix cost(a.size(), std::vector<double>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) cost[i][j] = std::abs(a[i] - b[j]);
  const auto assignment = critpair::optimal_assignment(cost);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (assignment.row_to_col[i] >= 0) worst = std::max(worst, cost[i][static_cast<std::size_t>(assignment.row_to_col[i])]);
  return worst;
}

inline std::vector<cplx> roots_of_unity(int n) {
  std::vector<cplx> out;
  for (int k = 0; k < n; ++k) out.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / n));
  return out;
}

inline std::vector<cplx> random_points(critpair::Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<cplx> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(rng.uniform(-scale, scale), rng.uniform(-scale, scale));
  return out;
}

}  // namespace testing_support
