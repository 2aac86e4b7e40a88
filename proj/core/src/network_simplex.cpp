#include "network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shrinker_ot::detail {

NetworkSimplex::NetworkSimplex(std::vector<double> supply, std::vector<double> demand,
                               const std::vector<std::int64_t>& costs)
    : n0_(static_cast<int>(supply.size())),
      n1_(static_cast<int>(demand.size())),
      nodes_(n0_ + n1_),
      real_arcs_(static_cast<std::int64_t>(n0_) * n1_),
      costs_(costs) {
  supply_.reserve(nodes_ + 1);
  for (double s : supply) supply_.push_back(s);
  for (double d : demand) supply_.push_back(-d);
  supply_.push_back(0.0);

  std::int64_t max_cost = 0;
  for (std::int64_t c : costs_) max_cost = std::max(max_cost, c < 0 ? -c : c);
  artificial_cost_ = (static_cast<Cost>(max_cost) + 1) * (nodes_ + 1);

  block_size_ = std::max<std::int64_t>(
      10, static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(real_arcs_)))));

  const int root = nodes_;
  parent_.assign(nodes_ + 1, -1);
  pred_.assign(nodes_ + 1, -1);
  up_.assign(nodes_ + 1, 0);
  flow_.assign(nodes_ + 1, 0.0);
  pi_.assign(nodes_ + 1, 0);
  depth_.assign(nodes_ + 1, 0);
  adjacent_.assign(nodes_ + 1, {});
  adjacent_[root].reserve(nodes_);
  for (int u = 0; u < nodes_; ++u) {
    parent_[u] = root;
    pred_[u] = real_arcs_ + u;
    depth_[u] = 1;
    adjacent_[u].push_back(root);
    adjacent_[root].push_back(u);
    if (supply_[u] >= 0.0) {
      up_[u] = 1;
      flow_[u] = supply_[u];
      pi_[u] = 0;
    } else {
      up_[u] = 0;
      flow_[u] = -supply_[u];
      pi_[u] = artificial_cost_;
    }
  }
}

std::int64_t NetworkSimplex::arc_source(std::int64_t arc) const {
  if (arc < real_arcs_) return arc / n1_;
  const std::int64_t u = arc - real_arcs_;
  return supply_[u] >= 0.0 ? u : nodes_;
}

std::int64_t NetworkSimplex::arc_target(std::int64_t arc) const {
  if (arc < real_arcs_) return n0_ + arc % n1_;
  const std::int64_t u = arc - real_arcs_;
  return supply_[u] >= 0.0 ? nodes_ : u;
}

NetworkSimplex::Cost NetworkSimplex::arc_cost(std::int64_t arc) const {
  if (arc < real_arcs_) return costs_[arc];
  return supply_[arc - real_arcs_] >= 0.0 ? 0 : artificial_cost_;
}

bool NetworkSimplex::find_entering_arc() {
  Cost best = 0;
  std::int64_t best_arc = -1;
  std::int64_t budget = block_size_;
  std::int64_t e = next_arc_;
  std::int64_t i = e / n1_;
  std::int64_t j = e % n1_;
  for (std::int64_t scanned = 0; scanned < real_arcs_; ++scanned) {
    const Cost reduced = static_cast<Cost>(costs_[e]) + pi_[i] - pi_[n0_ + j];
    if (reduced < best) {
      best = reduced;
      best_arc = e;
    }
    ++e;
    if (++j == n1_) {
      j = 0;
      if (++i == n0_) {
        i = 0;
        e = 0;
      }
    }
    if (--budget == 0) {
      if (best_arc >= 0) break;
      budget = block_size_;
    }
  }
  if (best_arc < 0) return false;
  in_arc_ = best_arc;
  next_arc_ = e;
  return true;
}

int NetworkSimplex::find_join_node(int u, int v) const {
  while (u != v) {
    if (depth_[u] > depth_[v]) {
      u = parent_[u];
    } else if (depth_[v] > depth_[u]) {
      v = parent_[v];
    } else {
      u = parent_[u];
      v = parent_[v];
    }
  }
  return u;
}

void NetworkSimplex::remove_edge(int a, int b) {
  auto& list = adjacent_[a];
  const auto it = std::find(list.begin(), list.end(), b);
  *it = list.back();
  list.pop_back();
}

void NetworkSimplex::pivot(int join) {
  const auto first = static_cast<int>(arc_source(in_arc_));
  const auto second = static_cast<int>(arc_target(in_arc_));
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Cunningham's rule: last blocking arc met when walking the cycle from the join.
  double delta = kInf;
  int u_out = -1;
  int side = 0;
  for (int u = first; u != join; u = parent_[u]) {
    const double d = up_[u] ? flow_[u] : kInf;
    if (d < delta) {
      delta = d;
      u_out = u;
      side = 1;
    }
  }
  for (int u = second; u != join; u = parent_[u]) {
    const double d = up_[u] ? kInf : flow_[u];
    if (d <= delta) {
      delta = d;
      u_out = u;
      side = 2;
    }
  }

  if (delta > 0.0) {
    for (int u = first; u != join; u = parent_[u]) flow_[u] += up_[u] ? -delta : delta;
    for (int u = second; u != join; u = parent_[u]) flow_[u] += up_[u] ? delta : -delta;
  }
  // The blocking arc must read exactly zero whatever rounding did.
  flow_[u_out] = 0.0;

  const int r = side == 1 ? first : second;
  const int attach = side == 1 ? second : first;

  // Re-hang the subtree of u_out from r: the tree records along r -> u_out shift down one step.
  std::vector<int> path;
  for (int u = r;; u = parent_[u]) {
    path.push_back(u);
    if (u == u_out) break;
  }
  const int old_parent = parent_[u_out];
  for (std::size_t k = path.size() - 1; k >= 1; --k) {
    pred_[path[k]] = pred_[path[k - 1]];
    up_[path[k]] = !up_[path[k - 1]];
    flow_[path[k]] = flow_[path[k - 1]];
  }
  pred_[r] = in_arc_;
  up_[r] = arc_source(in_arc_) == r;
  flow_[r] = delta;

  remove_edge(u_out, old_parent);
  remove_edge(old_parent, u_out);
  adjacent_[r].push_back(attach);
  adjacent_[attach].push_back(r);

  // Refresh parent, depth and potentials over the moved subtree.
  std::vector<std::pair<int, int>> stack{{r, attach}};
  while (!stack.empty()) {
    const auto [x, y] = stack.back();
    stack.pop_back();
    parent_[x] = y;
    depth_[x] = depth_[y] + 1;
    const Cost c = arc_cost(pred_[x]);
    pi_[x] = up_[x] ? pi_[y] - c : pi_[y] + c;
    for (int z : adjacent_[x]) {
      if (z != y) stack.emplace_back(z, x);
    }
  }
}

bool NetworkSimplex::run(long max_iterations) {
  while (find_entering_arc()) {
    if (iterations_ >= max_iterations) return false;
    const auto u = static_cast<int>(arc_source(in_arc_));
    const auto v = static_cast<int>(arc_target(in_arc_));
    pivot(find_join_node(u, v));
    ++iterations_;
  }
  return true;
}

std::vector<NetworkSimplex::Flow> NetworkSimplex::flows() const {
  std::vector<Flow> out;
  for (int u = 0; u < nodes_; ++u) {
    if (pred_[u] < real_arcs_ && flow_[u] > 0.0) {
      out.push_back({static_cast<int>(pred_[u] / n1_), static_cast<int>(pred_[u] % n1_), flow_[u]});
    }
  }
  return out;
}

double NetworkSimplex::artificial_flow() const {
  double total = 0.0;
  for (int u = 0; u < nodes_; ++u) {
    if (pred_[u] >= real_arcs_) total += flow_[u];
  }
  return total;
}

long double NetworkSimplex::primal_objective() const {
  long double total = 0.0L;
  for (int u = 0; u < nodes_; ++u) {
    if (pred_[u] < real_arcs_) {
      total += static_cast<long double>(flow_[u]) * static_cast<long double>(costs_[pred_[u]]);
    }
  }
  return total;
}

long double NetworkSimplex::dual_objective() const {
  // Potentials are defined up to a constant; measuring them from node 0 keeps
  // the products small when supplies cancel.
  long double total = 0.0L;
  for (int u = 0; u < nodes_; ++u) {
    total -= static_cast<long double>(supply_[u]) * static_cast<long double>(pi_[u] - pi_[0]);
  }
  return total;
}

}  // namespace shrinker_ot::detail
