#include "critpair/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace critpair {

namespace {

constexpr signed char kTree = 0;
constexpr signed char kLower = 1;
constexpr signed char kUp = 1;
constexpr signed char kDown = -1;
constexpr std::int64_t kInfFlow = std::numeric_limits<std::int64_t>::max();
constexpr double kPivotTolerance = 1e-10;

}  // namespace

NetworkSimplex::NetworkSimplex(std::vector<std::int64_t> supply) : node_count_(static_cast<int>(supply.size())) {
  if (std::accumulate(supply.begin(), supply.end(), std::int64_t{0}) != 0)
    throw std::invalid_argument("NetworkSimplex: supplies must sum to zero");
  const int n = node_count_;
  root_ = n;
  const std::size_t nodes = static_cast<std::size_t>(n) + 1;
  pi_.assign(nodes, 0.0);
  parent_.assign(nodes, -1);
  pred_.assign(nodes, -1);
  thread_.assign(nodes, 0);
  rev_thread_.assign(nodes, 0);
  succ_num_.assign(nodes, 1);
  last_succ_.assign(nodes, 0);
  pred_dir_.assign(nodes, kUp);

  // Initial basis: a star of artificial arcs around the root. Their costs are
  // filled in by solve() once the real costs are known.
  thread_[static_cast<std::size_t>(root_)] = n > 0 ? 0 : root_;
  rev_thread_[0] = root_;
  succ_num_[static_cast<std::size_t>(root_)] = n + 1;
  last_succ_[static_cast<std::size_t>(root_)] = n > 0 ? n - 1 : root_;
  for (int u = 0; u < n; ++u) {
    const std::size_t su = static_cast<std::size_t>(u);
    parent_[su] = root_;
    pred_[su] = u;
    thread_[su] = u + 1;
    rev_thread_[su + 1] = u;
    succ_num_[su] = 1;
    last_succ_[su] = u;
    if (supply[su] >= 0) {
      pred_dir_[su] = kUp;
      source_.push_back(u);
      target_.push_back(root_);
      flow_.push_back(supply[su]);
    } else {
      pred_dir_[su] = kDown;
      source_.push_back(root_);
      target_.push_back(u);
      flow_.push_back(-supply[su]);
    }
    cost_.push_back(0.0);
    state_.push_back(kTree);
  }
}

int NetworkSimplex::add_arc(int from, int to, double cost) {
  if (from < 0 || to < 0 || from >= node_count_ || to >= node_count_) throw std::out_of_range("add_arc: bad node");
  if (!(cost >= 0.0) || !std::isfinite(cost)) throw std::invalid_argument("add_arc: cost must be finite and non-negative");
  if (art_cost_ > 0.0 && cost > max_cost_) throw std::invalid_argument("add_arc: cost exceeds the range fixed at the first solve");
  source_.push_back(from);
  target_.push_back(to);
  cost_.push_back(cost);
  flow_.push_back(0);
  state_.push_back(kLower);
  max_cost_ = std::max(max_cost_, cost);
  return static_cast<int>(source_.size()) - 1 - node_count_;
}

bool NetworkSimplex::find_entering_arc() {
  const int first = node_count_;
  const int end = static_cast<int>(source_.size());
  const int count = end - first;
  if (count <= 0) return false;
  const int block = std::max(10, static_cast<int>(std::sqrt(static_cast<double>(count))));
  if (next_arc_ < first || next_arc_ >= end) next_arc_ = first;

  double best = -kPivotTolerance;
  int chosen = -1;
  int remaining = block;
  int e = next_arc_;
  for (int scanned = 0; scanned < count; ++scanned) {
    const std::size_t se = static_cast<std::size_t>(e);
    if (state_[se] == kLower) {
      const double rc = cost_[se] + pi_[static_cast<std::size_t>(source_[se])] - pi_[static_cast<std::size_t>(target_[se])];
      if (rc < best) {
        best = rc;
        chosen = e;
      }
    }
    if (++e == end) e = first;
    if (--remaining == 0) {
      if (chosen >= 0) break;
      remaining = block;
    }
  }
  if (chosen < 0) return false;
  in_arc_ = chosen;
  next_arc_ = e;
  return true;
}

void NetworkSimplex::find_join_node() {
  int u = source_[static_cast<std::size_t>(in_arc_)];
  int v = target_[static_cast<std::size_t>(in_arc_)];
  while (u != v) {
    if (succ_num_[static_cast<std::size_t>(u)] < succ_num_[static_cast<std::size_t>(v)])
      u = parent_[static_cast<std::size_t>(u)];
    else
      v = parent_[static_cast<std::size_t>(v)];
  }
  join_ = u;
}

bool NetworkSimplex::find_leaving_arc() {
  const int first = source_[static_cast<std::size_t>(in_arc_)];
  const int second = target_[static_cast<std::size_t>(in_arc_)];
  delta_ = kInfFlow;
  int result = 0;
  for (int u = first; u != join_; u = parent_[static_cast<std::size_t>(u)]) {
    const std::size_t su = static_cast<std::size_t>(u);
    const std::int64_t d = pred_dir_[su] == kUp ? flow_[static_cast<std::size_t>(pred_[su])] : kInfFlow;
    if (d < delta_) {
      delta_ = d;
      u_out_ = u;
      result = 1;
    }
  }
  for (int u = second; u != join_; u = parent_[static_cast<std::size_t>(u)]) {
    const std::size_t su = static_cast<std::size_t>(u);
    const std::int64_t d = pred_dir_[su] == kDown ? flow_[static_cast<std::size_t>(pred_[su])] : kInfFlow;
    if (d <= delta_) {
      delta_ = d;
      u_out_ = u;
      result = 2;
    }
  }
  if (result == 1) {
    u_in_ = first;
    v_in_ = second;
  } else {
    u_in_ = second;
    v_in_ = first;
  }
  return result != 0;
}

void NetworkSimplex::change_flow() {
  if (delta_ > 0) {
    flow_[static_cast<std::size_t>(in_arc_)] += delta_;
    for (int u = source_[static_cast<std::size_t>(in_arc_)]; u != join_; u = parent_[static_cast<std::size_t>(u)]) {
      const std::size_t su = static_cast<std::size_t>(u);
      flow_[static_cast<std::size_t>(pred_[su])] -= pred_dir_[su] * delta_;
    }
    for (int u = target_[static_cast<std::size_t>(in_arc_)]; u != join_; u = parent_[static_cast<std::size_t>(u)]) {
      const std::size_t su = static_cast<std::size_t>(u);
      flow_[static_cast<std::size_t>(pred_[su])] += pred_dir_[su] * delta_;
    }
  }
  state_[static_cast<std::size_t>(in_arc_)] = kTree;
  state_[static_cast<std::size_t>(pred_[static_cast<std::size_t>(u_out_)])] = kLower;
}

void NetworkSimplex::update_tree_structure() {
  auto& parent = parent_;
  auto& thread = thread_;
  auto& rev = rev_thread_;
  auto& last_succ = last_succ_;
  auto& succ_num = succ_num_;
  auto at = [](int i) { return static_cast<std::size_t>(i); };

  const int old_rev_thread = rev[at(u_out_)];
  const int old_succ_num = succ_num[at(u_out_)];
  const int old_last_succ = last_succ[at(u_out_)];
  v_out_ = parent[at(u_out_)];

  if (u_in_ == u_out_) {
    parent[at(u_in_)] = v_in_;
    pred_[at(u_in_)] = in_arc_;
    pred_dir_[at(u_in_)] = u_in_ == source_[at(in_arc_)] ? kUp : kDown;
    if (thread[at(v_in_)] != u_out_) {
      int after = thread[at(old_last_succ)];
      thread[at(old_rev_thread)] = after;
      rev[at(after)] = old_rev_thread;
      after = thread[at(v_in_)];
      thread[at(v_in_)] = u_out_;
      rev[at(u_out_)] = v_in_;
      thread[at(old_last_succ)] = after;
      rev[at(after)] = old_last_succ;
    }
  } else {
    const int thread_continue = old_rev_thread == v_in_ ? thread[at(old_last_succ)] : thread[at(v_in_)];

    // Re-hang the stem u_in -> ... -> u_out under v_in, splicing each stem
    // node's remaining subtree into the thread after the previous one.
    int stem = u_in_;
    int par_stem = v_in_;
    int last = last_succ[at(u_in_)];
    int after = thread[at(last)];
    thread[at(v_in_)] = u_in_;
    dirty_revs_.clear();
    dirty_revs_.push_back(v_in_);
    while (stem != u_out_) {
      const int next_stem = parent[at(stem)];
      thread[at(last)] = next_stem;
      dirty_revs_.push_back(last);

      const int before = rev[at(stem)];
      thread[at(before)] = after;
      rev[at(after)] = before;

      parent[at(stem)] = par_stem;
      par_stem = stem;
      stem = next_stem;

      last = last_succ[at(stem)] == last_succ[at(par_stem)] ? rev[at(par_stem)] : last_succ[at(stem)];
      after = thread[at(last)];
    }
    parent[at(u_out_)] = par_stem;
    thread[at(last)] = thread_continue;
    rev[at(thread_continue)] = last;
    last_succ[at(u_out_)] = last;

    if (old_rev_thread != v_in_) {
      thread[at(old_rev_thread)] = after;
      rev[at(after)] = old_rev_thread;
    }
    for (int u : dirty_revs_) rev[at(thread[at(u)])] = u;

    int tmp_sc = 0;
    const int tmp_ls = last_succ[at(u_out_)];
    for (int u = u_out_, p = parent[at(u)]; u != u_in_; u = p, p = parent[at(u)]) {
      pred_[at(u)] = pred_[at(p)];
      pred_dir_[at(u)] = static_cast<signed char>(-pred_dir_[at(p)]);
      tmp_sc += succ_num[at(u)] - succ_num[at(p)];
      succ_num[at(u)] = tmp_sc;
      last_succ[at(p)] = tmp_ls;
    }
    pred_[at(u_in_)] = in_arc_;
    pred_dir_[at(u_in_)] = u_in_ == source_[at(in_arc_)] ? kUp : kDown;
    succ_num[at(u_in_)] = old_succ_num;
  }

  const int up_limit_out = last_succ[at(join_)] == v_in_ ? join_ : -1;
  const int last_succ_out = last_succ[at(u_out_)];
  for (int u = v_in_; u != -1 && last_succ[at(u)] == v_in_; u = parent[at(u)]) last_succ[at(u)] = last_succ_out;

  if (join_ != old_rev_thread && v_in_ != old_rev_thread) {
    for (int u = v_out_; u != up_limit_out && last_succ[at(u)] == old_last_succ; u = parent[at(u)])
      last_succ[at(u)] = old_rev_thread;
  } else if (last_succ_out != old_last_succ) {
    for (int u = v_out_; u != up_limit_out && last_succ[at(u)] == old_last_succ; u = parent[at(u)])
      last_succ[at(u)] = last_succ_out;
  }

  for (int u = v_in_; u != join_; u = parent[at(u)]) succ_num[at(u)] += old_succ_num;
  for (int u = v_out_; u != join_; u = parent[at(u)]) succ_num[at(u)] -= old_succ_num;
}

void NetworkSimplex::update_potential() {
  const std::size_t ui = static_cast<std::size_t>(u_in_);
  const double sigma = pi_[static_cast<std::size_t>(v_in_)] - pi_[ui] - pred_dir_[ui] * cost_[static_cast<std::size_t>(in_arc_)];
  const int end = thread_[static_cast<std::size_t>(last_succ_[ui])];
  for (int u = u_in_; u != end; u = thread_[static_cast<std::size_t>(u)]) pi_[static_cast<std::size_t>(u)] += sigma;
}

bool NetworkSimplex::solve() {
  if (art_cost_ == 0.0) {
    max_cost_ = std::max(max_cost_, 1.0);
    art_cost_ = (max_cost_ + 1.0) * static_cast<double>(node_count_ + 1);
    for (int u = 0; u < node_count_; ++u) {
      const std::size_t su = static_cast<std::size_t>(u);
      if (pred_dir_[su] == kDown) {
        cost_[su] = art_cost_;
        pi_[su] = art_cost_;
      }
    }
  }

  while (find_entering_arc()) {
    find_join_node();
    if (!find_leaving_arc()) throw std::runtime_error("NetworkSimplex: unbounded cycle");
    change_flow();
    update_tree_structure();
    update_potential();
    ++pivots_;
  }

  // Recompute potentials from the tree to shed accumulated rounding.
  pi_[static_cast<std::size_t>(root_)] = 0.0;
  for (int u = thread_[static_cast<std::size_t>(root_)]; u != root_; u = thread_[static_cast<std::size_t>(u)]) {
    const std::size_t su = static_cast<std::size_t>(u);
    const std::size_t e = static_cast<std::size_t>(pred_[su]);
    const double p = pi_[static_cast<std::size_t>(parent_[su])];
    // Tree arcs have cost + pi[source] - pi[target] = 0.
    pi_[su] = pred_dir_[su] == kUp ? p - cost_[e] : p + cost_[e];
  }

  for (int u = 0; u < node_count_; ++u)
    if (flow_[static_cast<std::size_t>(u)] != 0) return false;
  return true;
}

double NetworkSimplex::total_cost() const {
  double total = 0.0;
  for (std::size_t e = static_cast<std::size_t>(node_count_); e < source_.size(); ++e)
    total += static_cast<double>(flow_[e]) * cost_[e];
  return total;
}

namespace {

std::int64_t total_weight(const WeightedPoints& p) {
  if (p.re.size() != p.im.size() || p.re.size() != p.weight.size())
    throw std::invalid_argument("truncated_w1: inconsistent point arrays");
  std::int64_t s = 0;
  for (std::int64_t w : p.weight) {
    if (w <= 0) throw std::invalid_argument("truncated_w1: weights must be positive");
    s += w;
  }
  if (s == 0) throw std::invalid_argument("truncated_w1: empty measure");
  return s;
}

}  // namespace

double truncated_w1(const WeightedPoints& a, const WeightedPoints& b) {
  const std::int64_t wa = total_weight(a), wb = total_weight(b);
  const std::int64_t g = std::gcd(wa, wb);
  const std::int64_t scale_a = wb / g, scale_b = wa / g;
  const int na = static_cast<int>(a.re.size()), nb = static_cast<int>(b.re.size());
  const int hub = na + nb;

  std::vector<std::int64_t> supply(static_cast<std::size_t>(hub) + 1, 0);
  for (int i = 0; i < na; ++i) supply[static_cast<std::size_t>(i)] = a.weight[static_cast<std::size_t>(i)] * scale_a;
  for (int j = 0; j < nb; ++j) supply[static_cast<std::size_t>(na + j)] = -b.weight[static_cast<std::size_t>(j)] * scale_b;

  NetworkSimplex ns(supply);
  for (int i = 0; i < na; ++i) ns.add_arc(i, hub, 0.5);
  for (int j = 0; j < nb; ++j) ns.add_arc(hub, na + j, 0.5);

  auto dist2 = [&](int i, int j) {
    const double dx = a.re[static_cast<std::size_t>(i)] - b.re[static_cast<std::size_t>(j)];
    const double dy = a.im[static_cast<std::size_t>(i)] - b.im[static_cast<std::size_t>(j)];
    return dx * dx + dy * dy;
  };

  std::vector<std::vector<int>> present(static_cast<std::size_t>(na));
  auto add_pair = [&](int i, int j) {
    auto& row = present[static_cast<std::size_t>(i)];
    if (std::find(row.begin(), row.end(), j) != row.end()) return false;
    row.push_back(j);
    ns.add_arc(i, na + j, std::sqrt(dist2(i, j)));
    return true;
  };

  // Seed with nearest neighbours in both directions; an atom carrying r
  // times the mass of a typical partner needs at least r partners.
  std::vector<std::pair<double, int>> buf;
  const int k_ab = 8 + 2 * static_cast<int>((nb + na - 1) / na);
  const int k_ba = 8 + 2 * static_cast<int>((na + nb - 1) / nb);
  for (int i = 0; i < na; ++i) {
    buf.clear();
    for (int j = 0; j < nb; ++j) buf.emplace_back(dist2(i, j), j);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(k_ab), buf.size());
    std::partial_sort(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(k), buf.end());
    for (std::size_t t = 0; t < k; ++t)
      if (buf[t].first < 1.0) add_pair(i, buf[t].second);
  }
  for (int j = 0; j < nb; ++j) {
    buf.clear();
    for (int i = 0; i < na; ++i) buf.emplace_back(dist2(i, j), i);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(k_ba), buf.size());
    std::partial_sort(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(k), buf.end());
    for (std::size_t t = 0; t < k; ++t)
      if (buf[t].first < 1.0) add_pair(buf[t].second, j);
  }

  // A pair (i, j) prices out negative only if |x_i - y_j| < pi_j - pi_i, so
  // most pairs are rejected on squared distances alone.
  constexpr std::size_t kPerRow = 32;
  std::vector<double> pi_b(static_cast<std::size_t>(nb));
  while (true) {
    if (!ns.solve()) throw std::runtime_error("truncated_w1: infeasible transport problem");
    for (int j = 0; j < nb; ++j) pi_b[static_cast<std::size_t>(j)] = ns.potential(na + j);
    bool added = false;
    for (int i = 0; i < na; ++i) {
      const double pi_a = ns.potential(i);
      const double xr = a.re[static_cast<std::size_t>(i)], xi = a.im[static_cast<std::size_t>(i)];
      buf.clear();
      for (int j = 0; j < nb; ++j) {
        const std::size_t sj = static_cast<std::size_t>(j);
        const double gap = std::min(pi_b[sj] - pi_a - 1e-9, 1.0);
        if (gap <= 0.0) continue;
        const double dx = xr - b.re[sj], dy = xi - b.im[sj];
        const double d2 = dx * dx + dy * dy;
        if (d2 >= gap * gap) continue;
        buf.emplace_back(std::sqrt(d2) - gap, j);
      }
      if (buf.empty()) continue;
      const std::size_t k = std::min(kPerRow, buf.size());
      std::partial_sort(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(k), buf.end());
      for (std::size_t t = 0; t < k; ++t) added = add_pair(i, buf[t].second) || added;
    }
    if (!added) break;
  }
  const double units = static_cast<double>(wa) * static_cast<double>(scale_a);
  return ns.total_cost() / units;
}

}  // namespace critpair
