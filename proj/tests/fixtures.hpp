#pragma once

#include "seqalloc/model.hpp"

namespace fixtures {

// Two agents with ranking a,b,c,d in common; sincere picking with 1,2,2,1 is
// not Pareto efficient here.
inline seqalloc::Instance inefficient_pair() {
  return seqalloc::Instance(2, {"a", "b", "c", "d"}, {{5, 4, 2, 0}, {8, 2, 1, 0}});
}

// Orders bac / abc / acb with Borda scores 2,1,0.
inline seqalloc::Instance borda_trio() {
  return seqalloc::Instance(3, {"a", "b", "c"}, {{1, 2, 0}, {2, 1, 0}, {2, 0, 1}});
}

inline seqalloc::Policy pol(std::initializer_list<int> one_based) {
  seqalloc::Policy p;
  for (int a : one_based) p.turns.push_back(a - 1);
  return p;
}

inline seqalloc::Allocation alloc(std::initializer_list<int> one_based) {
  seqalloc::Allocation a;
  for (int x : one_based) a.owner.push_back(x - 1);
  return a;
}

}  // namespace fixtures
