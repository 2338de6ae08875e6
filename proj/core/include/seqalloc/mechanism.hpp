#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "seqalloc/model.hpp"

namespace seqalloc {

// Sincere sequential allocation: at each turn the named agent takes its
// highest-ranked item among those still unallocated.
Allocation simulate(const Instance& inst, const Policy& p);

// Remaining items and per-agent remaining target bundles at the point where
// no agent's top remaining item belongs to its own remaining bundle.
struct StuckState {
  std::vector<int> remaining_items;
  std::vector<std::vector<int>> remaining_bundles;
};

struct SynthesisResult {
  std::optional<Policy> policy;  // set iff the target is reachable
  std::optional<StuckState> stuck;
  Policy prefix;                 // picks made before getting stuck

  bool reached() const { return policy.has_value(); }
};

// Builds a policy whose sincere simulation yields target, picking at every
// step the lowest-indexed agent whose top remaining item is in its own
// remaining bundle.
SynthesisResult synthesize_policy(const Instance& inst, const Allocation& target);

bool is_reachable(const Instance& inst, const Allocation& target);

struct ImprovementResult {
  Allocation allocation;
  Policy policy;
  int rotations = 0;
};

// Turns alloc into a reachable allocation. Whenever synthesis is stuck, each
// agent demands its top remaining item; a cycle of that demand map exists and
// every agent on it receives the item it demands, giving up the one demanded
// from it. Bundle sizes are preserved and no agent's utility decreases.
ImprovementResult improve_allocation(const Instance& inst, const Allocation& alloc);

struct ParetoResult {
  bool efficient = true;
  std::optional<Allocation> improved_by;
};

inline constexpr std::uint64_t kDefaultParetoCap = 10'000'000;

// Exhaustive search over all n^m allocations. If any allocation Pareto
// improves alloc, returns one chosen by: bundle sizes of alloc kept, then
// maximum utilitarian welfare, then fewest reassigned items. Throws
// GuardExceeded when n^m exceeds cap.
ParetoResult pareto_check_bruteforce(const Instance& inst, const Allocation& alloc,
                                     std::uint64_t cap = kDefaultParetoCap);

}  // namespace seqalloc
