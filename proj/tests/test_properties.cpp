#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "seqalloc/mechanism.hpp"
#include "seqalloc/oracle.hpp"
#include "seqalloc/reductions.hpp"
#include "seqalloc/solvers.hpp"
#include "support/naive.hpp"

using namespace seqalloc;

namespace {

std::vector<int> random_turns(std::mt19937_64& rng, int n, int m) {
  std::uniform_int_distribution<int> da(0, n - 1);
  std::vector<int> t(m);
  for (int& x : t) x = da(rng);
  return t;
}

std::vector<int> random_owner(std::mt19937_64& rng, int n, int m) { return random_turns(rng, n, m); }

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("rankings are permutations in weakly decreasing utility") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 4, m = 1 + trial % 7;
    const auto inst = naive::random_instance(rng, n, m, 4, trial % 3 != 0);
    for (int a = 0; a < n; ++a) {
      auto r = inst.ranking(a);
      for (int i = 1; i < m; ++i) CHECK(inst.utility(a, r[i - 1]) >= inst.utility(a, r[i]));
      std::sort(r.begin(), r.end());
      for (int i = 0; i < m; ++i) CHECK(r[i] == i);
    }
  }
}

TEST_CASE("class membership is downward closed") {
  std::mt19937_64 rng(102);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + trial % 3, m = n * (1 + trial % 3);
    Policy p{random_turns(rng, n, m)};
    if (trial % 4 == 0) {
      std::vector<int> first(n);
      for (int i = 0; i < n; ++i) first[i] = i;
      std::shuffle(first.begin(), first.end(), rng);
      p = oracle::balanced_alternating_policy(first, m);
    }
    const auto cs = classify_policy(p, n);
    auto has = [&](PolicyClass c) { return std::find(cs.begin(), cs.end(), c) != cs.end(); };
    CHECK(has(PolicyClass::kAll));
    if (has(PolicyClass::kBalancedAlternating)) CHECK(has(PolicyClass::kRecursivelyBalanced));
    if (has(PolicyClass::kRecursivelyBalanced)) CHECK(has(PolicyClass::kBalanced));
    CHECK(has(PolicyClass::kBalanced) == naive::member(p.turns, n, naive::Cls::kBalanced));
    CHECK(has(PolicyClass::kRecursivelyBalanced) == naive::member(p.turns, n, naive::Cls::kRB));
    CHECK(has(PolicyClass::kBalancedAlternating) == naive::member(p.turns, n, naive::Cls::kBA));
  }
  CHECK(is_member(fixtures::pol({1, 2, 2, 1, 2, 1, 1, 2}), PolicyClass::kRecursivelyBalanced, 2));
}

TEST_CASE("welfare aggregates") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 4, m = 1 + trial % 6;
    const auto inst = naive::random_instance(rng, n, m, 9);
    const Allocation a{random_owner(rng, n, m)};
    const auto w = welfare(inst, a);
    CHECK(w.utilitarian == naive::utilitarian(w.per_agent));
    CHECK(w.egalitarian == naive::egalitarian(w.per_agent));
    CHECK(w.egalitarian >= 0);
    CHECK(w.per_agent == naive::bundle_values(inst, a.owner));
  }
}

TEST_CASE("padding preserves utilities and restricted rankings") {
  std::mt19937_64 rng(104);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 3, m = 1 + trial % 7;
    const auto inst = naive::random_instance(rng, n, m, 3, trial % 2 == 0);
    const auto p = pad_to_multiple(inst);
    CHECK(p.num_items() % n == 0);
    CHECK(p.num_items() - m < n);
    for (int a = 0; a < n; ++a) {
      for (int j = 0; j < m; ++j) CHECK(p.utility(a, j) == inst.utility(a, j));
      std::vector<int> restricted;
      for (int j : p.ranking(a))
        if (j < m) restricted.push_back(j);
      CHECK(restricted == inst.ranking(a));
    }
  }
}

TEST_CASE("simulate agrees with per-step argmax") {
  std::mt19937_64 rng(105);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 4, m = 1 + trial % 8;
    const auto inst = naive::random_instance(rng, n, m, 3, trial % 2 == 0);
    const auto t = random_turns(rng, n, m);
    CHECK(simulate(inst, Policy{t}).owner == naive::simulate(inst, t));
  }
}

TEST_CASE("synthesis round trip") {
  std::mt19937_64 rng(106);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 4, m = 1 + trial % 8;
    const auto inst = naive::random_instance(rng, n, m, 3, trial % 2 == 0);
    const auto target = simulate(inst, Policy{random_turns(rng, n, m)});
    const auto s = synthesize_policy(inst, target);
    REQUIRE(s.reached());
    CHECK(simulate(inst, *s.policy).owner == target.owner);
    const auto sizes = target.bundle_sizes(n);
    if (m % n == 0 && std::all_of(sizes.begin(), sizes.end(), [&](int k) { return k == m / n; })) {
      CHECK(is_member(*s.policy, PolicyClass::kBalanced, n));
    }
  }
}

TEST_CASE("greedy reachability is complete") {
  auto check_instance = [](const Instance& inst) {
    const auto reach = naive::reachable_allocations(inst);
    const std::set<std::vector<int>> reachable(reach.begin(), reach.end());
    naive::for_each_sequence(inst.num_agents(), inst.num_items(), [&](const std::vector<int>& owner) {
      CHECK(is_reachable(inst, Allocation{owner}) == (reachable.count(owner) > 0));
    });
  };
  naive::for_each_matrix(2, 3, 3, check_instance);
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 2 + trial % 2, m = 3 + trial % 3;
    check_instance(naive::random_instance(rng, n, m, 3, trial % 2 == 0));
  }
}

TEST_CASE("improvement is monotone") {
  std::mt19937_64 rng(108);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 4, m = 1 + trial % 8;
    const auto inst = naive::random_instance(rng, n, m, 5, trial % 2 == 0);
    const Allocation in{random_owner(rng, n, m)};
    const auto out = improve_allocation(inst, in);
    CHECK(is_reachable(inst, out.allocation));
    CHECK(simulate(inst, out.policy).owner == out.allocation.owner);
    CHECK(out.allocation.bundle_sizes(n) == in.bundle_sizes(n));
    CHECK(out.rotations <= m * m);
    const auto before = welfare(inst, in).per_agent, after = welfare(inst, out.allocation).per_agent;
    for (int a = 0; a < n; ++a) CHECK(after[a] >= before[a]);
    if (is_reachable(inst, in)) CHECK(out.allocation.owner == in.owner);
  }
}

TEST_CASE("max utilitarian over all policies has a closed form") {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 4, m = 1 + trial % 8;
    const auto inst = naive::random_instance(rng, n, m, 9);
    Utility expect = 0;
    for (int j = 0; j < m; ++j) {
      Utility best = 0;
      for (int a = 0; a < n; ++a) best = std::max(best, inst.utility(a, j));
      expect += best;
    }
    const auto r = max_utilitarian_all(inst);
    CHECK(r.value == expect);
    CHECK(naive::utilitarian(naive::bundle_values(inst, naive::simulate(inst, r.witness.turns))) ==
          expect);
  }
}

TEST_CASE("an egalitarian optimum with best utilitarian welfare is Pareto efficient") {
  std::mt19937_64 rng(110);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 2, m = 2 + trial % 3;
    const auto inst = naive::random_instance(rng, n, m, 4);
    std::vector<int> best;
    Utility be = -1, bu = -1;
    naive::for_each_sequence(n, m, [&](const std::vector<int>& owner) {
      const auto v = naive::bundle_values(inst, owner);
      const Utility e = naive::egalitarian(v), u = naive::utilitarian(v);
      if (e > be || (e == be && u > bu)) {
        be = e;
        bu = u;
        best = owner;
      }
    });
    CHECK(pareto_check_bruteforce(inst, Allocation{best}).efficient);
  }
}

TEST_CASE("every efficient utility vector is reachable") {
  std::mt19937_64 rng(114);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 2, m = 2 + trial % 3;
    const auto inst = naive::random_instance(rng, n, m, 2);
    std::set<std::vector<Utility>> reachable;
    for (const auto& owner : naive::reachable_allocations(inst)) {
      reachable.insert(naive::bundle_values(inst, owner));
    }
    naive::for_each_sequence(n, m, [&](const std::vector<int>& owner) {
      if (pareto_check_bruteforce(inst, Allocation{owner}).efficient) {
        CHECK(reachable.count(naive::bundle_values(inst, owner)) == 1);
      }
    });
  }
}

TEST_CASE("decisions are consistent with optima") {
  std::mt19937_64 rng(111);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 2, m = n * (1 + trial % 2);
    const auto inst = naive::random_instance(rng, n, m, 4);
    for (auto c : {PolicyClass::kAll, PolicyClass::kBalanced, PolicyClass::kRecursivelyBalanced,
                   PolicyClass::kBalancedAlternating}) {
      for (auto obj : {Objective::kUtilitarian, Objective::kEgalitarian}) {
        const auto mx = oracle::brute_force_optimum(inst, c, obj, Direction::kMax).value;
        const auto mn = oracle::brute_force_optimum(inst, c, obj, Direction::kMin).value;
        for (Utility t = 0; t <= mx + 1; ++t) {
          CHECK(oracle::brute_force_decide(inst, {obj, Mode::kPossible, t, c}).answer == (mx >= t));
          CHECK(oracle::brute_force_decide(inst, {obj, Mode::kNecessary, t, c}).answer == (mn >= t));
          CHECK(decide(inst, {obj, Mode::kPossible, t, c}).answer == (mx >= t));
          CHECK(decide(inst, {obj, Mode::kNecessary, t, c}).answer == (mn >= t));
        }
      }
    }
  }
}

TEST_CASE("Monte-Carlo estimates converge to the exact probability") {
  std::mt19937_64 rng(112);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 2, m = 2 * n;
    const auto inst = naive::random_instance(rng, n, m, 5);
    const auto dist = oracle::ba_welfare_distribution(inst, Objective::kUtilitarian);
    const Utility t = static_cast<Utility>(dist.mean());
    const double p = dist.probability_at_least(t);
    const std::uint64_t samples = 4000;
    const auto est = oracle::monte_carlo_ba(inst, Objective::kUtilitarian, t, samples, trial);
    const double sigma = std::sqrt(p * (1 - p) / samples);
    CHECK(std::abs(est.estimate - p) <= 4 * sigma + 1e-12);
  }
}

TEST_CASE("3DM gadget structure") {
  std::mt19937_64 rng(113);
  std::uniform_int_distribution<Utility> dv(0, 4);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 3;
    std::vector<Utility> x(n), y(n), z(n);
    Utility s = 0;
    for (int i = 0; i < n; ++i) s += (x[i] = dv(rng)) + (y[i] = dv(rng)) + (z[i] = dv(rng));
    const Utility rem = (n - s % n) % n;
    z[0] += rem;
    const Utility t = (s + rem) / n;
    const int m = 2 * n + trial % 3;
    const auto g = reductions::gen_numerical_3dm(x, y, z, t, m);
    for (int j = n; j < m; ++j)
      for (int a = 1; a < n; ++a) CHECK(g.instance.utility(a, j) == g.instance.utility(0, j));
    for (int j = 2 * n; j < m; ++j)
      for (int a = 0; a < n; ++a) CHECK(g.instance.utility(a, j) == 0);
    if (g.certificate) {
      CHECK(reductions::verify_witness(g, std::get<reductions::MatchingCertificate>(*g.certificate)));
    }
  }
}

}  // TEST_SUITE
