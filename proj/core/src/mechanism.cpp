#include "seqalloc/mechanism.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>
#include <string>

namespace seqalloc {

namespace {

void check_total(const Instance& inst, const Allocation& a) {
  if (a.num_items() != inst.num_items()) {
    throw InputError("allocation is not total: " + std::to_string(a.num_items()) +
                     " of " + std::to_string(inst.num_items()) + " items assigned");
  }
  for (int j = 0; j < a.num_items(); ++j) {
    if (a.owner[j] < 0 || a.owner[j] >= inst.num_agents()) {
      throw InputError("allocation: item " + std::to_string(j + 1) +
                       " has invalid owner");
    }
  }
}

// Greedy picking state shared by synthesis and improvement. The owner map is
// only ever modified on items that have not been picked yet.
class PickState {
 public:
  PickState(const Instance& inst, Allocation target)
      : inst_(inst),
        owner_(std::move(target.owner)),
        taken_(inst.num_items(), false),
        cursor_(inst.num_agents(), 0),
        remaining_(inst.num_agents(), 0) {
    for (int a : owner_) ++remaining_[a];
  }

  int top(int agent) {
    const auto& r = inst_.ranking(agent);
    int& c = cursor_[agent];
    while (taken_[r[c]]) ++c;
    return r[c];
  }

  bool done() const { return picks_.size() == owner_.size(); }

  // Picks for the lowest eligible agent; false when stuck.
  bool step() {
    for (int a = 0; a < inst_.num_agents(); ++a) {
      if (remaining_[a] == 0) continue;
      const int item = top(a);
      if (owner_[item] != a) continue;
      taken_[item] = true;
      --remaining_[a];
      picks_.push_back(a);
      return true;
    }
    return false;
  }

  bool run() {
    while (!done()) {
      if (!step()) return false;
    }
    return true;
  }

  // Rotates demanded items along one cycle of the demand map.
  void rotate() {
    const int n = inst_.num_agents();
    std::vector<int> demand(n, -1);
    int start = -1;
    for (int a = 0; a < n; ++a) {
      if (remaining_[a] == 0) continue;
      demand[a] = owner_[top(a)];
      if (start < 0) start = a;
    }
    std::vector<int> seen_at(n, -1);
    std::vector<int> walk;
    int a = start;
    while (seen_at[a] < 0) {
      seen_at[a] = static_cast<int>(walk.size());
      walk.push_back(a);
      a = demand[a];
    }
    std::vector<int> cycle(walk.begin() + seen_at[a], walk.end());
    std::vector<int> wanted;
    for (int member : cycle) wanted.push_back(top(member));
    for (std::size_t i = 0; i < cycle.size(); ++i) owner_[wanted[i]] = cycle[i];
  }

  StuckState stuck_state() const {
    StuckState s;
    s.remaining_bundles.resize(inst_.num_agents());
    for (int j = 0; j < static_cast<int>(owner_.size()); ++j) {
      if (taken_[j]) continue;
      s.remaining_items.push_back(j);
      s.remaining_bundles[owner_[j]].push_back(j);
    }
    return s;
  }

  Policy policy() const { return Policy{picks_}; }
  Allocation allocation() const { return Allocation{owner_}; }

 private:
  const Instance& inst_;
  std::vector<int> owner_;
  std::vector<bool> taken_;
  std::vector<int> cursor_;
  std::vector<int> remaining_;
  std::vector<int> picks_;
};

}  // namespace

Allocation simulate(const Instance& inst, const Policy& p) {
  const int m = inst.num_items();
  if (static_cast<int>(p.size()) != m) {
    throw InputError("policy length " + std::to_string(p.size()) +
                     " does not match item count " + std::to_string(m));
  }
  Allocation alloc{std::vector<int>(m, -1)};
  std::vector<bool> taken(m, false);
  std::vector<int> cursor(inst.num_agents(), 0);
  for (int agent : p.turns) {
    if (agent < 0 || agent >= inst.num_agents()) {
      throw InputError("policy: invalid agent index " + std::to_string(agent + 1));
    }
    const auto& r = inst.ranking(agent);
    int& c = cursor[agent];
    while (taken[r[c]]) ++c;
    taken[r[c]] = true;
    alloc.owner[r[c]] = agent;
  }
  return alloc;
}

SynthesisResult synthesize_policy(const Instance& inst, const Allocation& target) {
  check_total(inst, target);
  PickState state(inst, target);
  SynthesisResult result;
  if (state.run()) {
    result.policy = state.policy();
  } else {
    result.stuck = state.stuck_state();
  }
  result.prefix = state.policy();
  return result;
}

bool is_reachable(const Instance& inst, const Allocation& target) {
  return synthesize_policy(inst, target).reached();
}

ImprovementResult improve_allocation(const Instance& inst, const Allocation& alloc) {
  check_total(inst, alloc);
  PickState state(inst, alloc);
  ImprovementResult result;
  while (!state.run()) {
    state.rotate();
    ++result.rotations;
  }
  result.allocation = state.allocation();
  result.policy = state.policy();
  return result;
}

ParetoResult pareto_check_bruteforce(const Instance& inst, const Allocation& alloc,
                                     std::uint64_t cap) {
  check_total(inst, alloc);
  const int n = inst.num_agents();
  const int m = inst.num_items();
  std::uint64_t count = 1;
  for (int j = 0; j < m; ++j) {
    if (count > cap / static_cast<std::uint64_t>(n)) {
      throw GuardExceeded("pareto check: " + std::to_string(n) + "^" +
                          std::to_string(m) + " allocations exceed cap " +
                          std::to_string(cap));
    }
    count *= static_cast<std::uint64_t>(n);
  }

  const auto base = welfare(inst, alloc).per_agent;
  const auto base_sizes = alloc.bundle_sizes(n);
  ParetoResult result;
  bool best_keeps = false;
  Utility best_sum = -1;
  int best_moved = 0;
  std::vector<int> owner(m, 0);
  std::vector<Utility> per_agent(n);
  while (true) {
    std::fill(per_agent.begin(), per_agent.end(), 0);
    int moved = 0;
    for (int j = 0; j < m; ++j) {
      per_agent[owner[j]] += inst.utility(owner[j], j);
      moved += owner[j] != alloc.owner[j];
    }
    bool weakly = true, strictly = false;
    for (int a = 0; a < n; ++a) {
      weakly &= per_agent[a] >= base[a];
      strictly |= per_agent[a] > base[a];
    }
    if (weakly && strictly) {
      const Utility sum = std::accumulate(per_agent.begin(), per_agent.end(),
                                          Utility{0});
      const bool keeps = Allocation{owner}.bundle_sizes(n) == base_sizes;
      const auto key = std::make_tuple(keeps, sum, -moved);
      if (!result.improved_by || key > std::make_tuple(best_keeps, best_sum, -best_moved)) {
        best_keeps = keeps;
        best_sum = sum;
        best_moved = moved;
        result.improved_by = Allocation{owner};
      }
    }
    int j = m - 1;
    while (j >= 0 && owner[j] == n - 1) owner[j--] = 0;
    if (j < 0) break;
    ++owner[j];
  }
  result.efficient = !result.improved_by.has_value();
  return result;
}

}  // namespace seqalloc
