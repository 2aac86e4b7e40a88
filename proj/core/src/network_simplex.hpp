#pragma once

#include <cstdint>
#include <vector>

namespace shrinker_ot::detail {

// Primal network simplex for the uncapacitated transportation problem
//   min sum c_ij x_ij  s.t.  sum_j x_ij = supply_i,  sum_i x_ij = demand_j,  x >= 0
// on the complete bipartite graph. Arc (i, j) has id i * n1 + j and integer
// cost costs[id]. Starts from the artificial-root tree, prices with block
// search, and keeps the tree strongly feasible so degenerate pivots cannot cycle.
class NetworkSimplex {
public:
  using Cost = __int128;

  NetworkSimplex(std::vector<double> supply, std::vector<double> demand,
                 const std::vector<std::int64_t>& costs);

  // Returns false if the iteration cap was reached before optimality.
  bool run(long max_iterations);

  long iterations() const { return iterations_; }

  struct Flow {
    int i;
    int j;
    double mass;
  };
  // Positive flows on real arcs, unsorted.
  std::vector<Flow> flows() const;
  // Total flow still routed through the artificial root.
  double artificial_flow() const;
  // Primal and dual objectives in scaled cost units.
  long double primal_objective() const;
  long double dual_objective() const;

private:
  std::int64_t arc_source(std::int64_t arc) const;
  std::int64_t arc_target(std::int64_t arc) const;
  Cost arc_cost(std::int64_t arc) const;

  bool find_entering_arc();
  int find_join_node(int u, int v) const;
  void pivot(int join);
  void remove_edge(int a, int b);

  int n0_;
  int n1_;
  int nodes_;  // n0 + n1; the root has index nodes_
  std::int64_t real_arcs_;
  const std::vector<std::int64_t>& costs_;
  std::vector<double> supply_;  // per node, demands negative
  Cost artificial_cost_ = 0;

  std::vector<int> parent_;
  std::vector<std::int64_t> pred_;
  std::vector<char> up_;  // pred arc points from the node to its parent
  std::vector<double> flow_;
  std::vector<Cost> pi_;
  std::vector<int> depth_;
  std::vector<std::vector<int>> adjacent_;

  std::int64_t block_size_;
  std::int64_t next_arc_ = 0;
  std::int64_t in_arc_ = -1;
  long iterations_ = 0;
};

}  // namespace shrinker_ot::detail
