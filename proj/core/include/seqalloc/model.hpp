#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seqalloc {

using Utility = std::int64_t;

// Malformed input: bad documents, invalid policies, violated preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exhaustive search would exceed its configured size cap.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Agents have additive, nonnegative integer utilities over a set of items.
// Each agent converts its utilities into a strict ranking by sorting items by
// utility, resolving ties with its own tie-break order. All indices are
// 0-based internally; external formats are 1-based.
//
// An Instance is immutable once constructed; the constructor validates every
// invariant and throws InputError naming the offending field.
class Instance {
 public:
  Instance(int n_agents, std::vector<std::string> item_labels,
           std::vector<std::vector<Utility>> utilities,
           std::optional<std::vector<std::vector<int>>> tie_break = std::nullopt,
           std::vector<bool> dummy = {});

  int num_agents() const { return n_agents_; }
  int num_items() const { return static_cast<int>(labels_.size()); }

  const std::string& label(int item) const { return labels_[item]; }
  const std::vector<std::string>& labels() const { return labels_; }
  Utility utility(int agent, int item) const { return utilities_[agent][item]; }
  const std::vector<std::vector<Utility>>& utilities() const {
    return utilities_;
  }
  const std::vector<int>& tie_break(int agent) const {
    return tie_break_[agent];
  }
  bool is_dummy(int item) const { return dummy_[item]; }
  int num_dummies() const;

  // Strict ranking of items for an agent, most preferred first.
  const std::vector<int>& ranking(int agent) const { return rankings_[agent]; }
  const std::vector<std::vector<int>>& rankings() const { return rankings_; }

  Utility max_utility() const;
  Utility total_utility(int agent) const;

 private:
  int n_agents_;
  std::vector<std::string> labels_;
  std::vector<std::vector<Utility>> utilities_;
  std::vector<std::vector<int>> tie_break_;
  std::vector<bool> dummy_;
  std::vector<std::vector<int>> rankings_;
};

struct PreferenceProfile {
  std::vector<std::vector<int>> rankings;
};

// Sorts each agent's items by utility (descending), then dummy items after
// real ones, then by position in that agent's tie-break order.
PreferenceProfile derive_rankings(const Instance& inst);

// Appends zero-utility dummy items so the item count is a multiple of the
// agent count. Dummies are labelled "dummy1", "dummy2", ... and are placed
// last in every tie-break order.
Instance pad_to_multiple(const Instance& inst);

struct Policy {
  std::vector<int> turns;  // 0-based agent indices

  std::size_t size() const { return turns.size(); }
  friend bool operator==(const Policy&, const Policy&) = default;
  friend auto operator<=>(const Policy&, const Policy&) = default;
};

// Accepts "1,2,2,1" and, when n_agents <= 9, the compact form "1221".
Policy parse_policy(std::string_view text, int n_agents);
std::string format_policy(const Policy& p);

enum class PolicyClass { kAll, kBalanced, kRecursivelyBalanced, kBalancedAlternating };

std::string_view to_string(PolicyClass c);
PolicyClass parse_policy_class(std::string_view text);

// Membership predicates. m is taken from the policy length.
bool is_balanced(std::span<const int> turns, int n_agents);
bool is_recursively_balanced(std::span<const int> turns, int n_agents);
bool is_balanced_alternating(std::span<const int> turns, int n_agents);
bool is_member(const Policy& p, PolicyClass c, int n_agents);

// Every class containing p, ordered from largest (All) to smallest.
std::vector<PolicyClass> classify_policy(const Policy& p, int n_agents);
std::vector<PolicyClass> classify_policy(const Policy& p, const Instance& inst);

struct Allocation {
  std::vector<int> owner;  // item -> agent

  int num_items() const { return static_cast<int>(owner.size()); }
  std::vector<std::vector<int>> bundles(int n_agents) const;
  std::vector<int> bundle_sizes(int n_agents) const;
  friend bool operator==(const Allocation&, const Allocation&) = default;
};

struct WelfareReport {
  std::vector<Utility> per_agent;
  Utility utilitarian = 0;
  Utility egalitarian = 0;

  friend bool operator==(const WelfareReport&, const WelfareReport&) = default;
};

WelfareReport welfare(const Instance& inst, const Allocation& alloc);

enum class Objective { kUtilitarian, kEgalitarian };
enum class Mode { kPossible, kNecessary };
enum class Direction { kMax, kMin };

std::string_view to_string(Objective o);
std::string_view to_string(Mode m);
std::string_view to_string(Direction d);
Objective parse_objective(std::string_view text);
Mode parse_mode(std::string_view text);
Direction parse_direction(std::string_view text);

Utility objective_value(const WelfareReport& w, Objective o);

struct DecisionProblem {
  Objective objective = Objective::kUtilitarian;
  Mode mode = Mode::kPossible;
  Utility threshold = 0;
  PolicyClass policy_class = PolicyClass::kAll;
};

// Parses the JSON instance document:
//   {"agents": n, "items": [...], "utilities": [[...], ...],
//    "tie_break": optional [[...], ...]}
// tie_break rows are 1-based item indices.
Instance load_instance(std::string_view document);
Instance load_instance_file(const std::string& path);

}  // namespace seqalloc
