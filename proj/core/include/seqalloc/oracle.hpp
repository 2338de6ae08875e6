#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "seqalloc/model.hpp"

namespace seqalloc {

enum class Method { kPolynomialExact, kBruteForce };
std::string_view to_string(Method m);

struct OptimumResult {
  Utility value = 0;
  Policy witness;
  Allocation witness_allocation;
  Method method = Method::kPolynomialExact;
};

struct DecisionAnswer {
  bool answer = false;
  // A yes-witness for Possible, a counterexample for a failed Necessary.
  std::optional<Policy> witness;
  Method method = Method::kPolynomialExact;
  // Items appended by padding before the query was answered; witnesses refer
  // to the padded instance.
  int padded_items = 0;
};

namespace oracle {

inline constexpr std::uint64_t kDefaultGuard = 10'000'000;

struct Options {
  std::uint64_t guard = kDefaultGuard;
  int jobs = 1;
};

// Closed-form class size, saturating at UINT64_MAX. Zero when the class is
// empty (restricted classes need m divisible by n).
std::uint64_t class_size(PolicyClass c, int n, int m);

// Calls visit(turns) for every policy of the class in lexicographic order
// until it returns false. Throws GuardExceeded or InputError (divisibility).
void for_each_policy(PolicyClass c, int n, int m,
                     const std::function<bool(std::span<const int>)>& visit,
                     std::uint64_t guard = kDefaultGuard);

std::vector<Policy> enumerate_policies(PolicyClass c, int n, int m,
                                       std::uint64_t guard = kDefaultGuard);

// Exhaustive optimum; the witness is the lexicographically smallest policy
// attaining the extreme value, independent of options.jobs.
OptimumResult brute_force_optimum(const Instance& inst, PolicyClass c,
                                  Objective objective, Direction direction,
                                  const Options& options = {});

// Possible: first policy (lexicographic order) reaching the threshold.
// Necessary: first policy falling below it, else yes.
DecisionAnswer brute_force_decide(const Instance& inst, const DecisionProblem& q,
                                  const Options& options = {});

struct WelfareDistribution {
  std::map<Utility, std::uint64_t> entries;
  std::uint64_t total = 0;
  Objective objective = Objective::kUtilitarian;
  PolicyClass policy_class = PolicyClass::kBalancedAlternating;

  double mean() const;
  Utility min() const { return entries.begin()->first; }
  Utility max() const { return entries.rbegin()->first; }
  double probability_at_least(Utility t) const;
};

// Exact distribution over all n! balanced alternating policies.
WelfareDistribution ba_welfare_distribution(const Instance& inst, Objective objective,
                                            const Options& options = {});

struct MonteCarloEstimate {
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  double estimate = 0.0;
  double wilson_low = 0.0;  // 95% Wilson score interval
  double wilson_high = 0.0;
};

// Samples balanced alternating policies uniformly (uniform first round) from
// a generator seeded with seed. Reproducible for a fixed seed.
MonteCarloEstimate monte_carlo_ba(const Instance& inst, Objective objective,
                                  Utility threshold, std::uint64_t samples,
                                  std::uint64_t seed);

// Balanced alternating policy built from a first round (0-based agents).
Policy balanced_alternating_policy(std::span<const int> first_round, int m);

}  // namespace oracle
}  // namespace seqalloc
