#pragma once

#include <cstdint>
#include <vector>

namespace critpair {

/// Primal network simplex for uncapacitated min-cost flow with integer
/// supplies and real costs (spanning-tree form with thread and
/// last-successor lists, block-search pivoting). Arcs may be added between
/// solves; the previous basis is kept as a warm start.
class NetworkSimplex {
 public:
  /// supply[v] > 0 for sources, < 0 for sinks; must sum to zero.
  explicit NetworkSimplex(std::vector<std::int64_t> supply);

  int add_arc(int from, int to, double cost);

  /// Runs to optimality. Returns false if some artificial arc still carries
  /// flow (the supplies cannot be routed).
  bool solve();

  double reduced_cost(int from, int to, double cost) const { return cost + pi_[static_cast<std::size_t>(from)] - pi_[static_cast<std::size_t>(to)]; }
  double potential(int node) const { return pi_[static_cast<std::size_t>(node)]; }
  double total_cost() const;
  std::int64_t flow(int arc) const { return flow_[static_cast<std::size_t>(arc + node_count_)]; }
  int arc_count() const { return static_cast<int>(source_.size()) - node_count_; }
  std::int64_t pivots() const { return pivots_; }

 private:
  bool find_entering_arc();
  void find_join_node();
  bool find_leaving_arc();
  void change_flow();
  void update_tree_structure();
  void update_potential();

  int node_count_;
  int root_;
  double art_cost_ = 0.0;
  double max_cost_ = 0.0;
  std::int64_t pivots_ = 0;

  std::vector<int> source_, target_;
  std::vector<double> cost_;
  std::vector<std::int64_t> flow_;
  std::vector<signed char> state_;

  std::vector<double> pi_;
  std::vector<int> parent_, pred_, thread_, rev_thread_, succ_num_, last_succ_, dirty_revs_;
  std::vector<signed char> pred_dir_;

  int next_arc_ = 0;
  int in_arc_ = -1, join_ = -1, u_in_ = -1, v_in_ = -1, u_out_ = -1, v_out_ = -1;
  std::int64_t delta_ = 0;
};

/// Weighted point set; weights are positive integers (multiplicities).
struct WeightedPoints {
  std::vector<double> re, im;
  std::vector<std::int64_t> weight;
};

/// Wasserstein-1 distance with ground cost min(|x - y|, 1) between the
/// normalized measures, solved exactly. The sparse graph holds k nearest
/// neighbour arcs and a hub node reached at cost 1/2 from every source and
/// reaching every sink at cost 1/2 (so any pair costs at most 1). Missing
/// pairs closer than 1 are priced after each solve and added while any has
/// negative reduced cost, which certifies optimality on the full problem.
double truncated_w1(const WeightedPoints& a, const WeightedPoints& b);

}  // namespace critpair
