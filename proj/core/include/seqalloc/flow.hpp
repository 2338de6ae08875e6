#pragma once

#include <cstdint>
#include <vector>

namespace seqalloc::flow {

// Integral min-cost max-flow by successive shortest augmenting paths.
// Potentials are seeded with Bellman-Ford, so negative arc costs are allowed
// as long as the network has no negative cycle; later searches use Dijkstra
// on reduced costs.
class MinCostFlow {
 public:
  using Flow = std::int64_t;
  using Cost = std::int64_t;

  explicit MinCostFlow(int num_nodes);

  // Returns the arc id, usable with flow_on().
  int add_arc(int from, int to, Flow capacity, Cost cost);

  struct Result {
    Flow flow = 0;
    Cost cost = 0;
  };
  Result solve(int source, int sink);

  Flow flow_on(int arc) const { return arcs_[2 * arc].flow; }
  int num_nodes() const { return static_cast<int>(adjacency_.size()); }

 private:
  struct Arc {
    int to;
    Flow capacity;
    Flow flow;
    Cost cost;
  };
  Flow residual(int e) const { return arcs_[e].capacity - arcs_[e].flow; }

  std::vector<Arc> arcs_;  // arc 2k is forward, 2k+1 its reverse
  std::vector<std::vector<int>> adjacency_;
};

// Maximum bipartite matching by augmenting paths. adjacency[l] lists the
// right vertices admissible for left vertex l, in preference order.
// Returns match[l] = matched right vertex or -1.
std::vector<int> max_bipartite_matching(const std::vector<std::vector<int>>& adjacency,
                                        int num_right);

}  // namespace seqalloc::flow
