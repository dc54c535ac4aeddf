#include "critpair/assignment.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>

namespace critpair {

namespace {

std::size_t column_count(const CostMatrix& cost) {
  const std::size_t c = cost.empty() ? 0 : cost[0].size();
  for (const auto& row : cost)
    if (row.size() != c) throw std::invalid_argument("assignment: ragged cost matrix");
  return c;
}

CostMatrix transpose(const CostMatrix& cost, std::size_t cols) {
  CostMatrix t(cols, std::vector<double>(cost.size()));
  for (std::size_t i = 0; i < cost.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) t[j][i] = cost[i][j];
  return t;
}

Assignment untranspose(const Assignment& t, std::size_t rows) {
  Assignment out;
  out.cost = t.cost;
  out.row_to_col.assign(rows, -1);
  for (std::size_t j = 0; j < t.row_to_col.size(); ++j)
    if (t.row_to_col[j] >= 0) out.row_to_col[static_cast<std::size_t>(t.row_to_col[j])] = static_cast<int>(j);
  return out;
}

}  // namespace

Assignment exhaustive_assignment(const CostMatrix& cost) {
  const std::size_t rows = cost.size(), cols = column_count(cost);
  if (rows > cols) return untranspose(exhaustive_assignment(transpose(cost, cols)), rows);

  Assignment best;
  best.row_to_col.assign(rows, -1);
  best.cost = rows == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  std::vector<int> current(rows, -1);
  std::vector<bool> used(cols, false);
  std::function<void(std::size_t, double)> search = [&](std::size_t i, double acc) {
    if (acc >= best.cost) return;
    if (i == rows) {
      best.cost = acc;
      best.row_to_col = current;
      return;
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (used[j]) continue;
      used[j] = true;
      current[i] = static_cast<int>(j);
      search(i + 1, acc + cost[i][j]);
      used[j] = false;
    }
    current[i] = -1;
  };
  search(0, 0.0);
  return best;
}

Assignment hungarian_assignment(const CostMatrix& cost) {
  const std::size_t rows = cost.size(), cols = column_count(cost);
  if (rows > cols) return untranspose(hungarian_assignment(transpose(cost, cols)), rows);

  // 1-based potentials u (rows) and v (columns); way[] stores the augmenting tree.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<std::size_t> match(cols + 1, 0), way(cols + 1, 0);
  for (std::size_t i = 1; i <= rows; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(cols + 1, inf);
    std::vector<bool> used(cols + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.row_to_col.assign(rows, -1);
  for (std::size_t j = 1; j <= cols; ++j) {
    if (match[j] != 0) {
      out.row_to_col[match[j] - 1] = static_cast<int>(j - 1);
      out.cost += cost[match[j] - 1][j - 1];
    }
  }
  return out;
}

Assignment optimal_assignment(const CostMatrix& cost) {
  const std::size_t rows = cost.size(), cols = column_count(cost);
  if (rows <= 8 && cols <= 8) return exhaustive_assignment(cost);
  return hungarian_assignment(cost);
}

}  // namespace critpair
