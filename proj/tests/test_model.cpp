#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "seqalloc/model.hpp"

using namespace seqalloc;
using fixtures::pol;

TEST_SUITE("model") {

TEST_CASE("instance construction") {
  const auto r1 = fixtures::inefficient_pair();
  CHECK(r1.num_agents() == 2);
  CHECK(r1.num_items() == 4);
  CHECK(r1.total_utility(0) == 11);
  CHECK(r1.max_utility() == 8);

  const Instance tiny(1, {"x"}, {{0}});
  CHECK(tiny.num_items() == 1);

  CHECK_THROWS_WITH_AS(Instance(2, {"a", "b"}, {{1, 2}, {3}}),
                       doctest::Contains("ragged matrix"), InputError);
  CHECK_THROWS_AS(Instance(1, {"a"}, {{-1}}), InputError);
  CHECK_THROWS_AS(Instance(2, {"a"}, {{1}}), InputError);
  CHECK_THROWS_AS(Instance(1, {"a", "a"}, {{1, 2}}), InputError);
  CHECK_THROWS_AS(Instance(1, {"a", "b"}, {{1, 2}}, std::vector<std::vector<int>>{{0, 0}}),
                  InputError);
  CHECK_THROWS_AS(Instance(0, {}, {}), InputError);
}

TEST_CASE("rankings") {
  const auto r1 = fixtures::inefficient_pair();
  CHECK(r1.ranking(0) == std::vector<int>{0, 1, 2, 3});
  CHECK(r1.ranking(1) == std::vector<int>{0, 1, 2, 3});

  const Instance flat(1, {"a", "b", "c"}, {{7, 7, 7}});
  CHECK(flat.ranking(0) == std::vector<int>{0, 1, 2});

  const Instance tb(1, {"i0", "i1", "i2"}, {{3, 3, 5}}, std::vector<std::vector<int>>{{2, 0, 1}});
  CHECK(tb.ranking(0) == std::vector<int>{2, 0, 1});

  const auto prof = derive_rankings(fixtures::borda_trio());
  REQUIRE(prof.rankings.size() == 3);
  CHECK(prof.rankings[0] == std::vector<int>{1, 0, 2});
  CHECK(prof.rankings[1] == std::vector<int>{0, 1, 2});
  CHECK(prof.rankings[2] == std::vector<int>{0, 2, 1});
}

TEST_CASE("padding with dummy items") {
  const auto r1 = fixtures::inefficient_pair();
  CHECK(pad_to_multiple(r1).num_items() == 4);

  const Instance three(2, {"a", "b", "c"}, {{1, 1, 1}, {0, 0, 0}});
  const auto p3 = pad_to_multiple(three);
  CHECK(p3.num_items() == 4);
  CHECK(p3.num_dummies() == 1);
  CHECK(p3.is_dummy(3));
  CHECK(p3.utility(0, 3) == 0);

  const Instance five(3, {"a", "b", "c", "d", "e"},
                      {{1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}});
  const auto p5 = pad_to_multiple(five);
  CHECK(p5.num_items() == 6);
  CHECK(p5.num_dummies() == 1);

  // A dummy never displaces a zero-valued real item.
  const auto p3b = pad_to_multiple(Instance(2, {"a", "b", "c"}, {{0, 0, 0}, {0, 0, 0}}));
  for (int a = 0; a < 2; ++a) CHECK(p3b.ranking(a).back() == 3);
}

TEST_CASE("policy parsing and formatting") {
  CHECK(parse_policy("1,2,2,1", 2).turns == std::vector<int>{0, 1, 1, 0});
  CHECK(parse_policy("1221", 2).turns == std::vector<int>{0, 1, 1, 0});
  CHECK(parse_policy(" 1, 2 ", 2).turns == std::vector<int>{0, 1});
  CHECK(format_policy(pol({1, 2, 2, 1})) == "1,2,2,1");
  CHECK_THROWS_AS(parse_policy("1,3", 2), InputError);
  CHECK_THROWS_AS(parse_policy("0", 2), InputError);
  CHECK_THROWS_AS(parse_policy("1,x", 2), InputError);
}

TEST_CASE("policy classes") {
  auto classes = [](std::initializer_list<int> p) { return classify_policy(pol(p), 2); };
  using PC = PolicyClass;
  CHECK(classes({1, 2, 2, 1}) ==
        std::vector<PC>{PC::kAll, PC::kBalanced, PC::kRecursivelyBalanced,
                        PC::kBalancedAlternating});
  CHECK(classes({1, 1, 1, 1, 2, 2, 2, 2}) == std::vector<PC>{PC::kAll, PC::kBalanced});
  CHECK(classes({1, 2, 2, 1, 2, 1}) ==
        std::vector<PC>{PC::kAll, PC::kBalanced, PC::kRecursivelyBalanced});
  CHECK(classes({1, 1, 2}) == std::vector<PC>{PC::kAll});

  for (auto c : {PC::kAll, PC::kBalanced, PC::kRecursivelyBalanced, PC::kBalancedAlternating}) {
    CHECK(parse_policy_class(to_string(c)) == c);
  }
  CHECK(parse_policy_class("rb") == PC::kRecursivelyBalanced);
  CHECK(parse_policy_class("ba") == PC::kBalancedAlternating);
  CHECK_THROWS_AS(parse_policy_class("fair"), InputError);
}

TEST_CASE("welfare") {
  const auto r1 = fixtures::inefficient_pair();
  auto w = welfare(r1, fixtures::alloc({1, 2, 2, 1}));
  CHECK(w.per_agent == std::vector<Utility>{5, 3});
  CHECK(w.utilitarian == 8);
  CHECK(w.egalitarian == 3);

  w = welfare(r1, fixtures::alloc({2, 1, 1, 2}));
  CHECK(w.per_agent == std::vector<Utility>{6, 8});

  w = welfare(r1, fixtures::alloc({1, 1, 1, 1}));
  CHECK(w.egalitarian == 0);
  CHECK(objective_value(w, Objective::kUtilitarian) == 11);
}

TEST_CASE("instance documents") {
  const auto inst = load_instance(R"({"agents":1,"items":["x","y","z"],
      "utilities":[[3,3,5]],"tie_break":[[3,1,2]]})");
  CHECK(inst.ranking(0) == std::vector<int>{2, 0, 1});
  CHECK_THROWS_AS(load_instance("{"), InputError);
  CHECK_THROWS_AS(load_instance(R"({"agents":2,"items":["a"],"utilities":[[1],[1,2]]})"),
                  InputError);
  CHECK_THROWS_AS(load_instance(R"({"items":["a"],"utilities":[[1]]})"), InputError);
  CHECK_THROWS_AS(load_instance_file("/nonexistent/instance.json"), InputError);
}

}  // TEST_SUITE
