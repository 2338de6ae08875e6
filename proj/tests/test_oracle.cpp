#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "seqalloc/mechanism.hpp"
#include "seqalloc/oracle.hpp"
#include "support/naive.hpp"

using namespace seqalloc;
using fixtures::pol;

TEST_SUITE("oracle") {

TEST_CASE("class enumeration") {
  const auto ba = oracle::enumerate_policies(PolicyClass::kBalancedAlternating, 2, 4);
  REQUIRE(ba.size() == 2);
  CHECK(ba[0] == pol({1, 2, 2, 1}));
  CHECK(ba[1] == pol({2, 1, 1, 2}));

  CHECK(oracle::enumerate_policies(PolicyClass::kRecursivelyBalanced, 2, 4).size() == 4);
  CHECK(oracle::enumerate_policies(PolicyClass::kBalanced, 2, 4).size() == 6);
  CHECK(oracle::enumerate_policies(PolicyClass::kAll, 1, 5).size() == 1);
  CHECK(oracle::enumerate_policies(PolicyClass::kAll, 3, 3).size() == 27);

  CHECK(oracle::class_size(PolicyClass::kBalanced, 3, 6) == 90);
  CHECK(oracle::class_size(PolicyClass::kRecursivelyBalanced, 3, 6) == 36);
  CHECK(oracle::class_size(PolicyClass::kBalancedAlternating, 3, 6) == 6);
  CHECK(oracle::class_size(PolicyClass::kAll, 60, 60) == UINT64_MAX);

  CHECK_THROWS_AS(oracle::enumerate_policies(PolicyClass::kBalanced, 2, 3), InputError);
  CHECK_THROWS_AS(oracle::enumerate_policies(PolicyClass::kAll, 4, 20), GuardExceeded);
}

TEST_CASE("enumeration agrees with a filtered odometer") {
  using C = naive::Cls;
  const std::pair<PolicyClass, C> classes[] = {{PolicyClass::kAll, C::kAll},
                                               {PolicyClass::kBalanced, C::kBalanced},
                                               {PolicyClass::kRecursivelyBalanced, C::kRB},
                                               {PolicyClass::kBalancedAlternating, C::kBA}};
  for (int n = 1; n <= 3; ++n) {
    for (int m = n; m <= 2 * n && m <= 6; m += n) {
      for (auto [c, nc] : classes) {
        std::vector<Policy> expected;
        naive::for_each_sequence(n, m, [&](const std::vector<int>& t) {
          if (naive::member(t, n, nc)) expected.push_back(Policy{t});
        });
        const auto got = oracle::enumerate_policies(c, n, m);
        CHECK(got == expected);
        CHECK(oracle::class_size(c, n, m) == expected.size());
      }
    }
  }
}

TEST_CASE("brute force optimum") {
  const auto e1 = fixtures::borda_trio();
  auto r = oracle::brute_force_optimum(e1, PolicyClass::kAll, Objective::kEgalitarian,
                                       Direction::kMax);
  CHECK(r.value == 1);
  CHECK(r.witness == pol({1, 2, 3}));
  CHECK(r.method == Method::kBruteForce);

  const auto r1 = fixtures::inefficient_pair();
  r = oracle::brute_force_optimum(r1, PolicyClass::kBalanced, Objective::kUtilitarian,
                                  Direction::kMax);
  CHECK(r.value == 14);

  const Instance solo(1, {"a", "b", "c"}, {{1, 2, 3}});
  for (auto d : {Direction::kMax, Direction::kMin}) {
    CHECK(oracle::brute_force_optimum(solo, PolicyClass::kAll, Objective::kUtilitarian, d)
              .value == 6);
  }
}

TEST_CASE("brute force matches the naive reference and is independent of jobs") {
  std::mt19937_64 rng(11);
  using C = naive::Cls;
  const std::pair<PolicyClass, C> classes[] = {{PolicyClass::kAll, C::kAll},
                                               {PolicyClass::kBalanced, C::kBalanced},
                                               {PolicyClass::kRecursivelyBalanced, C::kRB},
                                               {PolicyClass::kBalancedAlternating, C::kBA}};
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 2;
    const int m = n * (1 + trial % 2);
    const auto inst = naive::random_instance(rng, n, m, 4);
    for (auto [c, nc] : classes) {
      for (bool egal : {false, true}) {
        for (bool mx : {false, true}) {
          const auto obj = egal ? Objective::kEgalitarian : Objective::kUtilitarian;
          const auto dir = mx ? Direction::kMax : Direction::kMin;
          const auto ref = naive::optimum(inst, nc, egal, mx);
          oracle::Options seq, par;
          par.jobs = 3;
          const auto a = oracle::brute_force_optimum(inst, c, obj, dir, seq);
          const auto b = oracle::brute_force_optimum(inst, c, obj, dir, par);
          CHECK(a.value == ref.value);
          CHECK(a.witness.turns == ref.witness);
          CHECK(b.value == a.value);
          CHECK(b.witness == a.witness);
        }
      }
    }
  }
}

TEST_CASE("brute force decision") {
  const auto r1 = fixtures::inefficient_pair();
  auto d = oracle::brute_force_decide(
      r1, {Objective::kEgalitarian, Mode::kNecessary, 1, PolicyClass::kAll});
  CHECK_FALSE(d.answer);
  REQUIRE(d.witness.has_value());
  CHECK(*d.witness == pol({1, 1, 1, 1}));

  d = oracle::brute_force_decide(r1,
                                 {Objective::kEgalitarian, Mode::kPossible, 6, PolicyClass::kBalanced});
  CHECK(d.answer);
  REQUIRE(d.witness.has_value());
  CHECK(objective_value(welfare(r1, simulate(r1, *d.witness)), Objective::kEgalitarian) >= 6);

  for (auto mode : {Mode::kPossible, Mode::kNecessary}) {
    for (auto obj : {Objective::kUtilitarian, Objective::kEgalitarian}) {
      CHECK(oracle::brute_force_decide(r1, {obj, mode, 0, PolicyClass::kAll}).answer);
    }
  }
  CHECK_FALSE(oracle::brute_force_decide(
                  r1, {Objective::kUtilitarian, Mode::kPossible, 15, PolicyClass::kAll})
                  .answer);
}

TEST_CASE("balanced alternating distribution") {
  const auto r1 = fixtures::inefficient_pair();
  const auto d = oracle::ba_welfare_distribution(r1, Objective::kEgalitarian);
  CHECK(d.total == 2);
  CHECK(d.entries == std::map<Utility, std::uint64_t>{{3, 1}, {6, 1}});
  CHECK(d.mean() == doctest::Approx(4.5));
  CHECK(d.probability_at_least(5) == doctest::Approx(0.5));

  const Instance solo(1, {"a", "b"}, {{2, 3}});
  CHECK(oracle::ba_welfare_distribution(solo, Objective::kUtilitarian).entries.size() == 1);

  const Instance flat(3, {"a", "b", "c"}, {{2, 2, 2}, {2, 2, 2}, {2, 2, 2}});
  const auto df = oracle::ba_welfare_distribution(flat, Objective::kEgalitarian);
  CHECK(df.entries == std::map<Utility, std::uint64_t>{{2, 6}});
}

TEST_CASE("monte carlo estimate") {
  const auto r1 = fixtures::inefficient_pair();
  const auto a = oracle::monte_carlo_ba(r1, Objective::kEgalitarian, 5, 10000, 42);
  const auto b = oracle::monte_carlo_ba(r1, Objective::kEgalitarian, 5, 10000, 42);
  CHECK(a.hits == b.hits);
  CHECK(a.estimate == b.estimate);
  CHECK(a.wilson_low <= a.estimate);
  CHECK(a.estimate <= a.wilson_high);
  CHECK(std::abs(a.estimate - 0.5) <= 0.02);

  CHECK(oracle::monte_carlo_ba(r1, Objective::kEgalitarian, 0, 100, 1).estimate == 1.0);
  CHECK(oracle::monte_carlo_ba(r1, Objective::kUtilitarian, 100, 100, 1).estimate == 0.0);
  CHECK_THROWS_AS(oracle::monte_carlo_ba(r1, Objective::kEgalitarian, 5, 0, 1), InputError);
}

TEST_CASE("balanced alternating builder") {
  const std::vector<int> first{2, 0, 1};
  CHECK(oracle::balanced_alternating_policy(first, 9).turns ==
        std::vector<int>{2, 0, 1, 1, 0, 2, 2, 0, 1});
}

}  // TEST_SUITE
