#include "seqalloc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "seqalloc/mechanism.hpp"

namespace seqalloc {

std::string_view to_string(Method m) {
  return m == Method::kPolynomialExact ? "PolynomialExact" : "BruteForce";
}

namespace oracle {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::uint64_t factorial_sat(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f = mul_sat(f, static_cast<std::uint64_t>(i));
  return f;
}

std::uint64_t binomial_sat(int n, int k) {
  // Multiplicative formula; each intermediate is an exact binomial. Saturates
  // early if an intermediate product overflows.
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const auto factor = static_cast<std::uint64_t>(n - k + i);
    if (r > kSaturated / factor) return kSaturated;
    r = r * factor / static_cast<std::uint64_t>(i);
  }
  return r;
}

void check_shape(PolicyClass c, int n, int m, std::uint64_t guard) {
  if (n < 1 || m < 0) throw InputError("enumeration: invalid class dimensions");
  if (c != PolicyClass::kAll && m % n != 0) {
    throw InputError("enumeration: " + std::string(to_string(c)) +
                     " policies need the item count (" + std::to_string(m) +
                     ") to be a multiple of the agent count (" +
                     std::to_string(n) + ")");
  }
  const auto size = class_size(c, n, m);
  if (size > guard) {
    throw GuardExceeded("enumeration: " + std::string(to_string(c)) + " class has " +
                        (size == kSaturated ? std::string("more than 2^64")
                                            : std::to_string(size)) +
                        " policies, above the guard of " + std::to_string(guard));
  }
}

// Depth-first walk over the policies of one class in lexicographic order.
// The visitor sees enter/leave for every turn and leaf() at max depth.
class Walker {
 public:
  Walker(PolicyClass c, int n, int m)
      : class_(c), n_(n), m_(m), count_(n, 0), round_mark_(n, -1) {
    turns_.reserve(m);
  }

  template <class Visitor>
  bool run(std::span<const int> prefix, Visitor& v, int max_depth) {
    for (int a : prefix) {
      if (!allowed(a)) return true;
      push(a);
      v.enter(a);
    }
    return recurse(v, max_depth);
  }

 private:
  bool allowed(int a) const {
    const int depth = static_cast<int>(turns_.size());
    switch (class_) {
      case PolicyClass::kAll: return true;
      case PolicyClass::kBalanced: return count_[a] < m_ / n_;
      case PolicyClass::kRecursivelyBalanced: return round_mark_[a] != depth / n_;
      case PolicyClass::kBalancedAlternating:
        if (depth < n_) return round_mark_[a] != 0;
        return a == forced_agent(depth);
    }
    return false;
  }

  int forced_agent(int depth) const {
    const int round_start = depth - depth % n_;
    return turns_[round_start - 1 - (depth - round_start)];
  }

  void push(int a) {
    round_mark_stack_.push_back(round_mark_[a]);
    round_mark_[a] = static_cast<int>(turns_.size()) / n_;
    ++count_[a];
    turns_.push_back(a);
  }

  void pop() {
    const int a = turns_.back();
    turns_.pop_back();
    --count_[a];
    round_mark_[a] = round_mark_stack_.back();
    round_mark_stack_.pop_back();
  }

  template <class Visitor>
  bool recurse(Visitor& v, int max_depth) {
    const int depth = static_cast<int>(turns_.size());
    if (depth == max_depth) return v.leaf(std::span<const int>(turns_));
    for (int a = 0; a < n_; ++a) {
      if (!allowed(a)) continue;
      push(a);
      v.enter(a);
      const bool keep_going = recurse(v, max_depth);
      v.leave(a);
      pop();
      if (!keep_going) return false;
    }
    return true;
  }

  PolicyClass class_;
  int n_, m_;
  std::vector<int> turns_;
  std::vector<int> count_;
  std::vector<int> round_mark_;
  std::vector<int> round_mark_stack_;
};

// Sincere picking maintained incrementally along the walk.
class SimulatingVisitor {
 public:
  explicit SimulatingVisitor(const Instance& inst)
      : inst_(inst), taken_(inst.num_items(), false), per_agent_(inst.num_agents(), 0) {
    picked_.reserve(inst.num_items());
  }

  void enter(int a) {
    for (int item : inst_.ranking(a)) {
      if (taken_[item]) continue;
      taken_[item] = true;
      picked_.push_back(item);
      per_agent_[a] += inst_.utility(a, item);
      utilitarian_ += inst_.utility(a, item);
      return;
    }
  }

  void leave(int a) {
    const int item = picked_.back();
    picked_.pop_back();
    taken_[item] = false;
    per_agent_[a] -= inst_.utility(a, item);
    utilitarian_ -= inst_.utility(a, item);
  }

  Utility value(Objective o) const {
    if (o == Objective::kUtilitarian) return utilitarian_;
    return *std::min_element(per_agent_.begin(), per_agent_.end());
  }

 private:
  const Instance& inst_;
  std::vector<bool> taken_;
  std::vector<int> picked_;
  std::vector<Utility> per_agent_;
  Utility utilitarian_ = 0;
};

struct PrefixCollector {
  std::vector<std::vector<int>> prefixes;
  void enter(int) {}
  void leave(int) {}
  bool leaf(std::span<const int> t) {
    prefixes.emplace_back(t.begin(), t.end());
    return true;
  }
};

// Splits the walk into lexicographically ordered subtrees, one per prefix.
std::vector<std::vector<int>> make_tasks(PolicyClass c, int n, int m, int jobs) {
  if (jobs <= 1 || m == 0) return {{}};
  for (int depth = 1; depth <= m; ++depth) {
    PrefixCollector collect;
    Walker(c, n, m).run({}, collect, depth);
    if (collect.prefixes.size() >= static_cast<std::size_t>(8 * jobs) || depth == m) {
      return collect.prefixes;
    }
  }
  return {{}};
}

// Runs fn(task_index) for every task on `jobs` threads; results are stored
// by task index so reductions do not depend on scheduling.
template <class Result, class Fn>
std::vector<Result> run_tasks(std::size_t num_tasks, int jobs, Fn fn) {
  std::vector<Result> results(num_tasks);
  if (jobs <= 1 || num_tasks <= 1) {
    for (std::size_t i = 0; i < num_tasks; ++i) results[i] = fn(i);
    return results;
  }
  std::vector<std::jthread> workers;
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < num_tasks; i += jobs) results[i] = fn(i);
    });
  }
  workers.clear();
  return results;
}

bool better(Utility candidate, Utility incumbent, Direction d) {
  return d == Direction::kMax ? candidate > incumbent : candidate < incumbent;
}

struct TaskBest {
  bool found = false;
  Utility value = 0;
  std::vector<int> turns;
};

struct TaskHit {
  bool found = false;
  std::vector<int> turns;
};

}  // namespace

std::uint64_t class_size(PolicyClass c, int n, int m) {
  if (c != PolicyClass::kAll && m % n != 0) return 0;
  if (m == 0) return 1;
  const int rounds = m / n;
  switch (c) {
    case PolicyClass::kAll: {
      std::uint64_t r = 1;
      for (int i = 0; i < m; ++i) r = mul_sat(r, static_cast<std::uint64_t>(n));
      return r;
    }
    case PolicyClass::kBalanced: {
      std::uint64_t r = 1;
      for (int a = 0; a < n; ++a) r = mul_sat(r, binomial_sat(m - a * rounds, rounds));
      return r;
    }
    case PolicyClass::kRecursivelyBalanced: {
      std::uint64_t r = 1;
      const auto f = factorial_sat(n);
      for (int i = 0; i < rounds; ++i) r = mul_sat(r, f);
      return r;
    }
    case PolicyClass::kBalancedAlternating: return factorial_sat(n);
  }
  return 0;
}

void for_each_policy(PolicyClass c, int n, int m,
                     const std::function<bool(std::span<const int>)>& visit,
                     std::uint64_t guard) {
  check_shape(c, n, m, guard);
  struct Forwarder {
    const std::function<bool(std::span<const int>)>& visit;
    void enter(int) {}
    void leave(int) {}
    bool leaf(std::span<const int> t) { return visit(t); }
  } forwarder{visit};
  Walker(c, n, m).run({}, forwarder, m);
}

std::vector<Policy> enumerate_policies(PolicyClass c, int n, int m,
                                       std::uint64_t guard) {
  std::vector<Policy> out;
  for_each_policy(
      c, n, m,
      [&](std::span<const int> t) {
        out.push_back(Policy{{t.begin(), t.end()}});
        return true;
      },
      guard);
  return out;
}

OptimumResult brute_force_optimum(const Instance& inst, PolicyClass c,
                                  Objective objective, Direction direction,
                                  const Options& options) {
  const int n = inst.num_agents();
  const int m = inst.num_items();
  check_shape(c, n, m, options.guard);
  const auto tasks = make_tasks(c, n, m, options.jobs);

  auto results = run_tasks<TaskBest>(tasks.size(), options.jobs, [&](std::size_t i) {
    struct Visitor : SimulatingVisitor {
      using SimulatingVisitor::SimulatingVisitor;
      Objective objective;
      Direction direction;
      TaskBest best;
      bool leaf(std::span<const int> t) {
        const Utility v = value(objective);
        if (!best.found || better(v, best.value, direction)) {
          best.found = true;
          best.value = v;
          best.turns.assign(t.begin(), t.end());
        }
        return true;
      }
    } visitor(inst);
    visitor.objective = objective;
    visitor.direction = direction;
    Walker(c, n, m).run(tasks[i], visitor, m);
    return visitor.best;
  });

  TaskBest best;
  for (const auto& r : results) {
    if (r.found && (!best.found || better(r.value, best.value, direction))) best = r;
  }
  OptimumResult out;
  out.value = best.value;
  out.witness = Policy{best.turns};
  out.witness_allocation = simulate(inst, out.witness);
  out.method = Method::kBruteForce;
  return out;
}

DecisionAnswer brute_force_decide(const Instance& inst, const DecisionProblem& q,
                                  const Options& options) {
  const int n = inst.num_agents();
  const int m = inst.num_items();
  check_shape(q.policy_class, n, m, options.guard);
  const auto tasks = make_tasks(q.policy_class, n, m, options.jobs);
  const bool possible = q.mode == Mode::kPossible;

  auto results = run_tasks<TaskHit>(tasks.size(), options.jobs, [&](std::size_t i) {
    struct Visitor : SimulatingVisitor {
      using SimulatingVisitor::SimulatingVisitor;
      const DecisionProblem* q = nullptr;
      bool possible = true;
      TaskHit hit;
      bool leaf(std::span<const int> t) {
        const bool meets = value(q->objective) >= q->threshold;
        if (meets == possible) {
          hit.found = true;
          hit.turns.assign(t.begin(), t.end());
          return false;
        }
        return true;
      }
    } visitor(inst);
    visitor.q = &q;
    visitor.possible = possible;
    Walker(q.policy_class, n, m).run(tasks[i], visitor, m);
    return visitor.hit;
  });

  DecisionAnswer answer;
  answer.method = Method::kBruteForce;
  answer.answer = !possible;
  for (const auto& r : results) {
    if (!r.found) continue;
    answer.answer = possible;
    answer.witness = Policy{r.turns};
    break;
  }
  return answer;
}

double WelfareDistribution::mean() const {
  long double sum = 0;
  for (const auto& [value, count] : entries) {
    sum += static_cast<long double>(value) * static_cast<long double>(count);
  }
  return static_cast<double>(sum / static_cast<long double>(total));
}

double WelfareDistribution::probability_at_least(Utility t) const {
  std::uint64_t hits = 0;
  for (auto it = entries.lower_bound(t); it != entries.end(); ++it) hits += it->second;
  return static_cast<double>(hits) / static_cast<double>(total);
}

WelfareDistribution ba_welfare_distribution(const Instance& inst, Objective objective,
                                            const Options& options) {
  const int n = inst.num_agents();
  const int m = inst.num_items();
  check_shape(PolicyClass::kBalancedAlternating, n, m, options.guard);
  WelfareDistribution dist;
  dist.objective = objective;
  dist.policy_class = PolicyClass::kBalancedAlternating;
  struct Visitor : SimulatingVisitor {
    using SimulatingVisitor::SimulatingVisitor;
    Objective objective;
    WelfareDistribution* dist;
    bool leaf(std::span<const int>) {
      ++dist->entries[value(objective)];
      ++dist->total;
      return true;
    }
  } visitor(inst);
  visitor.objective = objective;
  visitor.dist = &dist;
  Walker(PolicyClass::kBalancedAlternating, n, m).run({}, visitor, m);
  return dist;
}

Policy balanced_alternating_policy(std::span<const int> first_round, int m) {
  const int n = static_cast<int>(first_round.size());
  Policy p;
  p.turns.reserve(m);
  for (int i = 0; i < m; ++i) {
    const int round = i / n;
    const int offset = i % n;
    p.turns.push_back(round % 2 == 0 ? first_round[offset]
                                     : first_round[n - 1 - offset]);
  }
  return p;
}

MonteCarloEstimate monte_carlo_ba(const Instance& inst, Objective objective,
                                  Utility threshold, std::uint64_t samples,
                                  std::uint64_t seed) {
  const int n = inst.num_agents();
  const int m = inst.num_items();
  if (samples < 1) throw InputError("sample: at least one sample is required");
  if (m % n != 0) {
    throw InputError("sample: balanced alternating policies need the item count "
                     "to be a multiple of the agent count");
  }
  std::mt19937_64 rng(seed);
  std::vector<int> first_round(n);
  std::iota(first_round.begin(), first_round.end(), 0);

  MonteCarloEstimate est;
  est.samples = samples;
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::shuffle(first_round.begin(), first_round.end(), rng);
    const auto alloc = simulate(inst, balanced_alternating_policy(first_round, m));
    if (objective_value(welfare(inst, alloc), objective) >= threshold) ++est.hits;
  }
  const double N = static_cast<double>(samples);
  const double p = static_cast<double>(est.hits) / N;
  constexpr double z = 1.959963984540054;
  const double denom = 1.0 + z * z / N;
  const double center = (p + z * z / (2.0 * N)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / N + z * z / (4.0 * N * N)) / denom;
  est.estimate = p;
  est.wilson_low = std::max(0.0, center - half);
  est.wilson_high = std::min(1.0, center + half);
  return est;
}

}  // namespace oracle
}  // namespace seqalloc
