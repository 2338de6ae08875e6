#pragma once

#include "seqalloc/model.hpp"
#include "seqalloc/oracle.hpp"

namespace seqalloc {

// Every solver verifies its witness by simulation before returning; a
// mismatch is an internal error (std::logic_error).

// Sum over items of the largest utility any agent has for it. The witness
// gives each item to a maximizing agent, then repairs reachability.
OptimumResult max_utilitarian_all(const Instance& inst);

// Zero with the constant policy 1,1,...,1 when there are at least two agents;
// the single agent's total utility otherwise.
OptimumResult min_egalitarian_all(const Instance& inst);

// Min-cost max-flow over source -> agent (capacity m/n) -> item (capacity 1,
// cost -utility) -> sink. Requires m divisible by n.
OptimumResult max_utilitarian_balanced(const Instance& inst);

// Two agents, m = 2h items: dynamic program over items in index order with
// states (items given to agent 1, utility sums).
OptimumResult two_agent_balanced_max(const Instance& inst, Objective objective);

// Two agents with identical rankings: each round splits the next two items of
// the common ranking and the only choice is who picks first. The witness is
// the lexicographically smallest optimal recursively balanced policy.
OptimumResult two_agent_rb_identical_max(const Instance& inst, Objective objective);

// One item per agent: is there a policy giving every agent utility >= t?
DecisionAnswer house_allocation_egalitarian(const Instance& inst, Utility t);
OptimumResult house_allocation_max_egalitarian(const Instance& inst);

struct SolveOptions {
  oracle::Options oracle;
  bool exact_only = false;  // throw NoExactAlgorithm instead of brute force
};

class NoExactAlgorithm : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveResult {
  OptimumResult optimum;
  int padded_items = 0;  // witness refers to the padded instance
};

// Optimum over a policy class, routed to a polynomial algorithm when one
// applies and to the exhaustive oracle otherwise. Restricted classes pad the
// instance with dummy items first.
SolveResult optimize(const Instance& inst, PolicyClass c, Objective objective,
                     Direction direction, const SolveOptions& options = {});

// Possible: max over the class >= t. Necessary: min over the class >= t.
DecisionAnswer decide(const Instance& inst, const DecisionProblem& q,
                      const SolveOptions& options = {});

// The instance a restricted-class query is actually answered on.
Instance prepare_for_class(const Instance& inst, PolicyClass c);

}  // namespace seqalloc
