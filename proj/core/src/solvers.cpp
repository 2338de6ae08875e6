#include "seqalloc/solvers.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <string>

#include "seqalloc/flow.hpp"
#include "seqalloc/mechanism.hpp"

namespace seqalloc {

namespace {

// Upper bound on DP table bits across all layers.
constexpr std::uint64_t kDpStateCap = std::uint64_t{1} << 31;

OptimumResult finish(const Instance& inst, Policy witness, Objective objective,
                     Utility value, const char* solver) {
  OptimumResult r;
  r.value = value;
  r.witness_allocation = simulate(inst, witness);
  r.witness = std::move(witness);
  r.method = Method::kPolynomialExact;
  const Utility achieved = objective_value(welfare(inst, r.witness_allocation), objective);
  if (achieved != value) {
    throw std::logic_error(std::string(solver) + ": witness achieves " +
                           std::to_string(achieved) + ", expected " +
                           std::to_string(value));
  }
  return r;
}

void require_two_agents_even(const Instance& inst, const char* solver) {
  if (inst.num_agents() != 2) {
    throw InputError(std::string(solver) + ": requires exactly two agents");
  }
  if (inst.num_items() % 2 != 0) {
    throw InputError(std::string(solver) + ": requires an even number of items");
  }
}

void check_dp_size(std::uint64_t bits, const char* solver) {
  if (bits > kDpStateCap) {
    throw GuardExceeded(std::string(solver) + ": dynamic program needs " +
                        std::to_string(bits) + " states, above the cap");
  }
}

// Dense 3-d reachability table.
class Grid3 {
 public:
  Grid3(int a, int b, int c) : b_(b), c_(c), bits_(static_cast<std::size_t>(a) * b * c) {}
  bool get(int x, int y, int z) const { return bits_[index(x, y, z)]; }
  void set(int x, int y, int z) { bits_[index(x, y, z)] = true; }

 private:
  std::size_t index(int x, int y, int z) const {
    return (static_cast<std::size_t>(x) * b_ + y) * c_ + z;
  }
  int b_, c_;
  std::vector<bool> bits_;
};

bool identical_rankings(const Instance& inst) {
  for (int a = 1; a < inst.num_agents(); ++a) {
    if (inst.ranking(a) != inst.ranking(0)) return false;
  }
  return true;
}

}  // namespace

OptimumResult max_utilitarian_all(const Instance& inst) {
  const int n = inst.num_agents();
  const int m = inst.num_items();
  Allocation greedy{std::vector<int>(m, 0)};
  Utility value = 0;
  for (int j = 0; j < m; ++j) {
    for (int a = 1; a < n; ++a) {
      if (inst.utility(a, j) > inst.utility(greedy.owner[j], j)) greedy.owner[j] = a;
    }
    value += inst.utility(greedy.owner[j], j);
  }
  auto improved = improve_allocation(inst, greedy);
  return finish(inst, std::move(improved.policy), Objective::kUtilitarian, value,
                "max_utilitarian_all");
}

OptimumResult min_egalitarian_all(const Instance& inst) {
  Policy constant{std::vector<int>(inst.num_items(), 0)};
  const Utility value = inst.num_agents() >= 2 ? 0 : inst.total_utility(0);
  return finish(inst, std::move(constant), Objective::kEgalitarian, value,
                "min_egalitarian_all");
}

OptimumResult max_utilitarian_balanced(const Instance& inst) {
  const int n = inst.num_agents();
  const int m = inst.num_items();
  if (m % n != 0) {
    throw InputError("max_utilitarian_balanced: item count " + std::to_string(m) +
                     " is not a multiple of agent count " + std::to_string(n));
  }
  const int per_agent = m / n;
  const int source = n + m;
  const int sink = n + m + 1;
  flow::MinCostFlow network(n + m + 2);
  for (int a = 0; a < n; ++a) network.add_arc(source, a, per_agent, 0);
  std::vector<std::vector<int>> arc(n, std::vector<int>(m));
  for (int a = 0; a < n; ++a) {
    for (int j = 0; j < m; ++j) arc[a][j] = network.add_arc(a, n + j, 1, -inst.utility(a, j));
  }
  for (int j = 0; j < m; ++j) network.add_arc(n + j, sink, 1, 0);
  const auto result = network.solve(source, sink);
  if (result.flow != m) {
    throw std::logic_error("max_utilitarian_balanced: flow does not saturate the items");
  }

  Allocation alloc{std::vector<int>(m, -1)};
  for (int a = 0; a < n; ++a) {
    for (int j = 0; j < m; ++j) {
      if (network.flow_on(arc[a][j]) == 1) alloc.owner[j] = a;
    }
  }
  auto improved = improve_allocation(inst, alloc);
  return finish(inst, std::move(improved.policy), Objective::kUtilitarian, -result.cost,
                "max_utilitarian_balanced");
}

OptimumResult two_agent_balanced_max(const Instance& inst, Objective objective) {
  require_two_agents_even(inst, "two_agent_balanced_max");
  const int m = inst.num_items();
  const int h = m / 2;
  const auto& u = inst.utilities();
  Allocation alloc{std::vector<int>(m, -1)};
  Utility value = 0;

  if (objective == Objective::kEgalitarian) {
    const int s1_max = static_cast<int>(inst.total_utility(0));
    const int s2_max = static_cast<int>(inst.total_utility(1));
    check_dp_size(static_cast<std::uint64_t>(m + 1) * (h + 1) * (s1_max + 1) * (s2_max + 1),
                  "two_agent_balanced_max");
    // suffix[i]: (items to agent 1, agent 1 sum, agent 2 sum) reachable by
    // distributing items i..m-1.
    std::vector<Grid3> suffix;
    suffix.reserve(m + 1);
    for (int i = 0; i <= m; ++i) suffix.emplace_back(h + 1, s1_max + 1, s2_max + 1);
    suffix[m].set(0, 0, 0);
    for (int i = m - 1; i >= 0; --i) {
      const int len = m - i - 1;
      for (int c = 0; c <= std::min(h, len); ++c) {
        if (len - c > h) continue;
        for (int s1 = 0; s1 <= s1_max; ++s1) {
          for (int s2 = 0; s2 <= s2_max; ++s2) {
            if (!suffix[i + 1].get(c, s1, s2)) continue;
            if (c + 1 <= h) suffix[i].set(c + 1, s1 + static_cast<int>(u[0][i]), s2);
            if (len - c + 1 <= h) suffix[i].set(c, s1, s2 + static_cast<int>(u[1][i]));
          }
        }
      }
    }
    value = -1;
    for (int s1 = 0; s1 <= s1_max; ++s1) {
      for (int s2 = 0; s2 <= s2_max; ++s2) {
        if (suffix[0].get(h, s1, s2)) value = std::max<Utility>(value, std::min(s1, s2));
      }
    }
    auto completes = [&](int i, int c, Utility a1, Utility a2) {
      const int need = h - c;
      if (need < 0) return false;
      for (int q1 = 0; q1 <= s1_max; ++q1) {
        for (int q2 = 0; q2 <= s2_max; ++q2) {
          if (suffix[i].get(need, q1, q2) && std::min(a1 + q1, a2 + q2) >= value) return true;
        }
      }
      return false;
    };
    int c = 0;
    Utility a1 = 0, a2 = 0;
    for (int i = 0; i < m; ++i) {
      if (c < h && completes(i + 1, c + 1, a1 + u[0][i], a2)) {
        alloc.owner[i] = 0;
        ++c;
        a1 += u[0][i];
      } else {
        alloc.owner[i] = 1;
        a2 += u[1][i];
      }
    }
  } else {
    Utility sum_max = 0;
    for (int j = 0; j < m; ++j) sum_max += std::max(u[0][j], u[1][j]);
    const int s_max = static_cast<int>(sum_max);
    check_dp_size(static_cast<std::uint64_t>(m + 1) * (h + 1) * (s_max + 1),
                  "two_agent_balanced_max");
    // suffix[i]: (items to agent 1, combined sum) reachable from items i..m-1.
    std::vector<Grid3> suffix;
    suffix.reserve(m + 1);
    for (int i = 0; i <= m; ++i) suffix.emplace_back(1, h + 1, s_max + 1);
    suffix[m].set(0, 0, 0);
    for (int i = m - 1; i >= 0; --i) {
      const int len = m - i - 1;
      for (int c = 0; c <= std::min(h, len); ++c) {
        if (len - c > h) continue;
        for (int s = 0; s <= s_max; ++s) {
          if (!suffix[i + 1].get(0, c, s)) continue;
          if (c + 1 <= h) suffix[i].set(0, c + 1, s + static_cast<int>(u[0][i]));
          if (len - c + 1 <= h) suffix[i].set(0, c, s + static_cast<int>(u[1][i]));
        }
      }
    }
    value = -1;
    for (int s = 0; s <= s_max; ++s) {
      if (suffix[0].get(0, h, s)) value = s;
    }
    int c = 0;
    Utility acc = 0;
    for (int i = 0; i < m; ++i) {
      const Utility rest = value - acc - u[0][i];
      if (c < h && rest >= 0 && rest <= s_max &&
          suffix[i + 1].get(0, h - c - 1, static_cast<int>(rest))) {
        alloc.owner[i] = 0;
        ++c;
        acc += u[0][i];
      } else {
        alloc.owner[i] = 1;
        acc += u[1][i];
      }
    }
  }

  auto improved = improve_allocation(inst, alloc);
  return finish(inst, std::move(improved.policy), objective, value,
                "two_agent_balanced_max");
}

OptimumResult two_agent_rb_identical_max(const Instance& inst, Objective objective) {
  require_two_agents_even(inst, "two_agent_rb_identical_max");
  if (!identical_rankings(inst)) {
    throw InputError("two_agent_rb_identical_max: agents' rankings differ");
  }
  const int rounds = inst.num_items() / 2;
  const auto& order = inst.ranking(0);
  // Round r splits order[2r] (taken by whoever picks first) and order[2r+1].
  // gain[r][0]: agent 1 first, gain[r][1]: agent 2 first.
  std::vector<std::array<std::pair<Utility, Utility>, 2>> gain(rounds);
  for (int r = 0; r < rounds; ++r) {
    const int hi = order[2 * r], lo = order[2 * r + 1];
    gain[r][0] = {inst.utility(0, hi), inst.utility(1, lo)};
    gain[r][1] = {inst.utility(0, lo), inst.utility(1, hi)};
  }
  const int s1_max = static_cast<int>(inst.total_utility(0));
  const int s2_max = static_cast<int>(inst.total_utility(1));
  const bool egal = objective == Objective::kEgalitarian;
  const int dim1 = egal ? s1_max + 1 : 1;
  const int dim2 = egal ? s2_max + 1 : s1_max + s2_max + 1;
  check_dp_size(static_cast<std::uint64_t>(rounds + 1) * dim1 * dim2,
                "two_agent_rb_identical_max");

  // Utilitarian states collapse the pair of sums into their total (y axis).
  std::vector<Grid3> suffix;
  suffix.reserve(rounds + 1);
  for (int r = 0; r <= rounds; ++r) suffix.emplace_back(1, dim1, dim2);
  suffix[rounds].set(0, 0, 0);
  for (int r = rounds - 1; r >= 0; --r) {
    for (int x = 0; x < dim1; ++x) {
      for (int y = 0; y < dim2; ++y) {
        if (!suffix[r + 1].get(0, x, y)) continue;
        for (const auto& [g1, g2] : gain[r]) {
          if (egal) {
            suffix[r].set(0, x + static_cast<int>(g1), y + static_cast<int>(g2));
          } else {
            suffix[r].set(0, 0, y + static_cast<int>(g1 + g2));
          }
        }
      }
    }
  }
  Utility value = -1;
  for (int x = 0; x < dim1; ++x) {
    for (int y = 0; y < dim2; ++y) {
      if (suffix[0].get(0, x, y)) value = std::max(value, egal ? std::min<Utility>(x, y) : y);
    }
  }
  // Completion check from round r given prefix sums.
  auto completes = [&](int r, Utility p1, Utility p2) {
    for (int x = 0; x < dim1; ++x) {
      for (int y = 0; y < dim2; ++y) {
        if (!suffix[r].get(0, x, y)) continue;
        const Utility total = egal ? std::min(p1 + x, p2 + y) : p1 + p2 + y;
        if (total >= value) return true;
      }
    }
    return false;
  };

  Policy policy;
  Utility p1 = 0, p2 = 0;
  for (int r = 0; r < rounds; ++r) {
    const auto [g1, g2] = gain[r][0];
    if (completes(r + 1, p1 + g1, p2 + g2)) {
      policy.turns.insert(policy.turns.end(), {0, 1});
      p1 += g1;
      p2 += g2;
    } else {
      policy.turns.insert(policy.turns.end(), {1, 0});
      p1 += gain[r][1].first;
      p2 += gain[r][1].second;
    }
  }
  return finish(inst, std::move(policy), objective, value, "two_agent_rb_identical_max");
}

DecisionAnswer house_allocation_egalitarian(const Instance& inst, Utility t) {
  const int n = inst.num_agents();
  if (inst.num_items() != n) {
    throw InputError("house allocation: requires exactly one item per agent");
  }
  std::vector<std::vector<int>> admissible(n);
  for (int a = 0; a < n; ++a) {
    for (int j = 0; j < n; ++j) {
      if (inst.utility(a, j) >= t) admissible[a].push_back(j);
    }
  }
  const auto match = flow::max_bipartite_matching(admissible, n);
  DecisionAnswer answer;
  answer.method = Method::kPolynomialExact;
  if (std::find(match.begin(), match.end(), -1) != match.end()) return answer;

  Allocation alloc{std::vector<int>(n)};
  for (int a = 0; a < n; ++a) alloc.owner[match[a]] = a;
  auto improved = improve_allocation(inst, alloc);
  const auto w = welfare(inst, simulate(inst, improved.policy));
  if (w.egalitarian < t) {
    throw std::logic_error("house allocation: witness misses the threshold");
  }
  answer.answer = true;
  answer.witness = std::move(improved.policy);
  return answer;
}

OptimumResult house_allocation_max_egalitarian(const Instance& inst) {
  const int n = inst.num_agents();
  if (inst.num_items() != n) {
    throw InputError("house allocation: requires exactly one item per agent");
  }
  std::set<Utility> distinct;
  for (const auto& row : inst.utilities()) distinct.insert(row.begin(), row.end());
  const std::vector<Utility> values(distinct.begin(), distinct.end());
  // The smallest utility is always achievable: every edge is admissible.
  std::size_t lo = 0, hi = values.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    if (house_allocation_egalitarian(inst, values[mid]).answer) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  auto answer = house_allocation_egalitarian(inst, values[lo]);
  return finish(inst, std::move(*answer.witness), Objective::kEgalitarian, values[lo],
                "house_allocation_max_egalitarian");
}

Instance prepare_for_class(const Instance& inst, PolicyClass c) {
  return c == PolicyClass::kAll ? inst : pad_to_multiple(inst);
}

SolveResult optimize(const Instance& inst, PolicyClass c, Objective objective,
                     Direction direction, const SolveOptions& options) {
  const Instance work = prepare_for_class(inst, c);
  SolveResult out;
  out.padded_items = work.num_items() - inst.num_items();
  const int n = work.num_agents();
  const int m = work.num_items();
  const bool util = objective == Objective::kUtilitarian;

  if (direction == Direction::kMax) {
    if (util && c == PolicyClass::kAll) {
      out.optimum = max_utilitarian_all(work);
      return out;
    }
    if (util && c == PolicyClass::kBalanced) {
      out.optimum = max_utilitarian_balanced(work);
      return out;
    }
    if (!util && c == PolicyClass::kAll && m == n && m > 0) {
      out.optimum = house_allocation_max_egalitarian(work);
      return out;
    }
    if (n == 2 && !util && c == PolicyClass::kBalanced) {
      out.optimum = two_agent_balanced_max(work, objective);
      return out;
    }
    if (n == 2 && c == PolicyClass::kRecursivelyBalanced && identical_rankings(work)) {
      out.optimum = two_agent_rb_identical_max(work, objective);
      return out;
    }
  } else if (!util && c == PolicyClass::kAll) {
    out.optimum = min_egalitarian_all(work);
    return out;
  }

  if (options.exact_only) {
    throw NoExactAlgorithm(
        "no polynomial algorithm for " + std::string(to_string(direction)) + " " +
        std::string(to_string(objective)) + " welfare over " +
        std::string(to_string(c)) + " policies on this instance");
  }
  out.optimum = oracle::brute_force_optimum(work, c, objective, direction, options.oracle);
  return out;
}

DecisionAnswer decide(const Instance& inst, const DecisionProblem& q,
                      const SolveOptions& options) {
  const Instance work = prepare_for_class(inst, q.policy_class);
  const int padded = work.num_items() - inst.num_items();
  const int n = work.num_agents();
  const int m = work.num_items();
  const bool util = q.objective == Objective::kUtilitarian;
  const auto c = q.policy_class;

  auto from_optimum = [&](const OptimumResult& opt) {
    DecisionAnswer a;
    a.method = Method::kPolynomialExact;
    a.answer = opt.value >= q.threshold;
    // Possible: the maximizer is a yes-witness. Necessary: the minimizer is a
    // counterexample.
    if (a.answer == (q.mode == Mode::kPossible)) a.witness = opt.witness;
    a.padded_items = padded;
    return a;
  };

  if (q.mode == Mode::kPossible) {
    if (util && c == PolicyClass::kAll) return from_optimum(max_utilitarian_all(work));
    if (util && c == PolicyClass::kBalanced) {
      return from_optimum(max_utilitarian_balanced(work));
    }
    if (!util && c == PolicyClass::kAll && m == n && m > 0) {
      auto a = house_allocation_egalitarian(work, q.threshold);
      a.padded_items = padded;
      return a;
    }
    if (n == 2 && !util && c == PolicyClass::kBalanced) {
      return from_optimum(two_agent_balanced_max(work, q.objective));
    }
    if (n == 2 && c == PolicyClass::kRecursivelyBalanced && identical_rankings(work)) {
      return from_optimum(two_agent_rb_identical_max(work, q.objective));
    }
  } else if (!util && c == PolicyClass::kAll) {
    return from_optimum(min_egalitarian_all(work));
  }

  if (options.exact_only) {
    throw NoExactAlgorithm("no polynomial algorithm for " + std::string(to_string(q.mode)) +
                           " " + std::string(to_string(q.objective)) + " welfare over " +
                           std::string(to_string(c)) + " policies on this instance");
  }
  auto a = oracle::brute_force_decide(work, q, options.oracle);
  a.padded_items = padded;
  return a;
}

}  // namespace seqalloc
