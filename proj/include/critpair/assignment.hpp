#pragma once

#include <vector>

namespace critpair {

using CostMatrix = std::vector<std::vector<double>>;

/// Partial one-to-one assignment of rows to columns covering min(rows, cols)
/// pairs. row_to_col[i] is -1 for an unassigned row.
struct Assignment {
  std::vector<int> row_to_col;
  double cost = 0.0;
};

/// Enumerates every injective map; only for tiny problems.
Assignment exhaustive_assignment(const CostMatrix& cost);

/// Kuhn-Munkres with potentials, O(r^2 c) for r <= c (transposed otherwise).
Assignment hungarian_assignment(const CostMatrix& cost);

/// Exhaustive search when both dimensions are at most 8, Hungarian otherwise.
Assignment optimal_assignment(const CostMatrix& cost);

}  // namespace critpair
