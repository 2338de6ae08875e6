#include "seqalloc/flow.hpp"

#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

namespace seqalloc::flow {

namespace {
constexpr MinCostFlow::Cost kInf = std::numeric_limits<MinCostFlow::Cost>::max() / 4;
}

MinCostFlow::MinCostFlow(int num_nodes) : adjacency_(num_nodes) {}

int MinCostFlow::add_arc(int from, int to, Flow capacity, Cost cost) {
  const int id = static_cast<int>(arcs_.size() / 2);
  adjacency_[from].push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({to, capacity, 0, cost});
  adjacency_[to].push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({from, 0, 0, -cost});
  return id;
}

MinCostFlow::Result MinCostFlow::solve(int source, int sink) {
  const int n = num_nodes();
  std::vector<Cost> potential(n, kInf);

  // Bellman-Ford over arcs with residual capacity.
  potential[source] = 0;
  for (int iter = 0; iter < n; ++iter) {
    bool changed = false;
    for (int v = 0; v < n; ++v) {
      if (potential[v] == kInf) continue;
      for (int e : adjacency_[v]) {
        if (residual(e) <= 0) continue;
        const int w = arcs_[e].to;
        if (potential[v] + arcs_[e].cost < potential[w]) {
          potential[w] = potential[v] + arcs_[e].cost;
          changed = true;
        }
      }
    }
    if (!changed) break;
    if (iter == n - 1) throw std::logic_error("min-cost flow: negative cycle");
  }
  for (auto& p : potential) {
    if (p == kInf) p = 0;
  }

  Result result;
  std::vector<Cost> dist(n);
  std::vector<int> via(n);
  using Entry = std::pair<Cost, int>;
  while (true) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(via.begin(), via.end(), -1);
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist[source] = 0;
    heap.emplace(0, source);
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d != dist[v]) continue;
      for (int e : adjacency_[v]) {
        if (residual(e) <= 0) continue;
        const int w = arcs_[e].to;
        const Cost nd = d + arcs_[e].cost + potential[v] - potential[w];
        if (nd < dist[w]) {
          dist[w] = nd;
          via[w] = e;
          heap.emplace(nd, w);
        }
      }
    }
    if (dist[sink] == kInf) break;
    for (int v = 0; v < n; ++v) {
      if (dist[v] < kInf) potential[v] += dist[v];
    }
    Flow push = std::numeric_limits<Flow>::max();
    for (int v = sink; v != source; v = arcs_[via[v] ^ 1].to) {
      push = std::min(push, residual(via[v]));
    }
    for (int v = sink; v != source; v = arcs_[via[v] ^ 1].to) {
      arcs_[via[v]].flow += push;
      arcs_[via[v] ^ 1].flow -= push;
      result.cost += push * arcs_[via[v]].cost;
    }
    result.flow += push;
  }
  return result;
}

std::vector<int> max_bipartite_matching(const std::vector<std::vector<int>>& adjacency,
                                        int num_right) {
  const int num_left = static_cast<int>(adjacency.size());
  std::vector<int> match_left(num_left, -1);
  std::vector<int> match_right(num_right, -1);
  std::vector<int> visited(num_right, -1);

  std::function<bool(int, int)> augment = [&](int l, int stamp) {
    for (int r : adjacency[l]) {
      if (visited[r] == stamp) continue;
      visited[r] = stamp;
      if (match_right[r] < 0 || augment(match_right[r], stamp)) {
        match_left[l] = r;
        match_right[r] = l;
        return true;
      }
    }
    return false;
  };
  for (int l = 0; l < num_left; ++l) augment(l, l);
  return match_left;
}

}  // namespace seqalloc::flow
