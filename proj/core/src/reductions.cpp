#include "seqalloc/reductions.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "seqalloc/mechanism.hpp"

namespace seqalloc::reductions {

namespace {

Utility sum_of(const std::vector<Utility>& v) {
  return std::accumulate(v.begin(), v.end(), Utility{0});
}

std::vector<std::string> numbered(const std::string& prefix, int count) {
  std::vector<std::string> out;
  for (int i = 1; i <= count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

void require_nonnegative(const std::vector<Utility>& v, const char* what) {
  for (Utility x : v) {
    if (x < 0) throw InputError(std::string(what) + ": entries must be nonnegative");
  }
}

bool meets_query(const GadgetInstance& g, const Policy& p) {
  const auto& inst = g.instance;
  if (static_cast<int>(p.size()) != inst.num_items()) return false;
  if (!is_member(p, g.query.policy_class, inst.num_agents())) return false;
  const auto w = welfare(inst, simulate(inst, p));
  return objective_value(w, g.query.objective) >= g.query.threshold;
}

bool valid_subset(const std::vector<int>& indices, int n) {
  std::vector<bool> seen(n, false);
  for (int i : indices) {
    if (i < 0 || i >= n || seen[i]) return false;
    seen[i] = true;
  }
  return true;
}

bool is_permutation_of(const std::vector<int>& p, int n) {
  return static_cast<int>(p.size()) == n && valid_subset(p, n);
}

}  // namespace

std::string_view to_string(GadgetKind k) {
  switch (k) {
    case GadgetKind::kNumerical3dm: return "3dm";
    case GadgetKind::kPartition: return "partition";
    case GadgetKind::kEquiPartition: return "equipartition";
    case GadgetKind::kTopK: return "topk";
  }
  return "?";
}

GadgetKind parse_gadget_kind(std::string_view text) {
  if (text == "3dm") return GadgetKind::kNumerical3dm;
  if (text == "partition") return GadgetKind::kPartition;
  if (text == "equipartition") return GadgetKind::kEquiPartition;
  if (text == "topk") return GadgetKind::kTopK;
  throw InputError("unknown gadget kind '" + std::string(text) + "'");
}

std::string_view to_string(TopKMode m) {
  switch (m) {
    case TopKMode::kPossibleEgal: return "possible-egalitarian";
    case TopKMode::kPossibleUtil: return "possible-utilitarian";
    case TopKMode::kNecessaryEgal: return "necessary-egalitarian";
    case TopKMode::kNecessaryUtil: return "necessary-utilitarian";
  }
  return "?";
}

TopKMode parse_topk_mode(std::string_view text) {
  if (text == "possible-egalitarian") return TopKMode::kPossibleEgal;
  if (text == "possible-utilitarian") return TopKMode::kPossibleUtil;
  if (text == "necessary-egalitarian") return TopKMode::kNecessaryEgal;
  if (text == "necessary-utilitarian") return TopKMode::kNecessaryUtil;
  throw InputError("unknown top-k mode '" + std::string(text) + "'");
}

GadgetInstance gen_numerical_3dm(const std::vector<Utility>& x,
                                 const std::vector<Utility>& y,
                                 const std::vector<Utility>& z, Utility target,
                                 int num_items) {
  const int n = static_cast<int>(x.size());
  if (n < 1 || static_cast<int>(y.size()) != n || static_cast<int>(z.size()) != n) {
    throw InputError("3dm: X, Y and Z must be nonempty and of equal size");
  }
  require_nonnegative(x, "3dm: X");
  require_nonnegative(y, "3dm: Y");
  require_nonnegative(z, "3dm: Z");
  if (sum_of(x) + sum_of(y) + sum_of(z) != n * target) {
    throw InputError("3dm: sum of X, Y and Z must equal n * t");
  }
  if (num_items < 2 * n) throw InputError("3dm: need at least 2n items");

  const Utility u = 1 + sum_of(z);
  auto labels = numbered("big", n);
  for (auto& s : numbered("small", n)) labels.push_back(std::move(s));
  for (auto& s : numbered("zero", num_items - 2 * n)) labels.push_back(std::move(s));
  std::vector<std::vector<Utility>> util(n, std::vector<Utility>(num_items, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      util[i][j] = u + x[i] + y[j];
      util[i][n + j] = z[j];
    }
  }

  GadgetInstance g{GadgetKind::kNumerical3dm,
                   Instance(n, std::move(labels), std::move(util)),
                   DecisionProblem{Objective::kEgalitarian, Mode::kPossible, u + target,
                                   PolicyClass::kAll},
                   std::nullopt,
                   ThreeDmParams{x, y, z, target, num_items},
                   {},
                   {}};
  if (n <= 8) {
    if (auto cert = find_matching_certificate(g.three_dm)) g.certificate = *cert;
  }
  return g;
}

GadgetInstance gen_partition_rb(const std::vector<Utility>& a) {
  const int n = static_cast<int>(a.size());
  if (n < 1) throw InputError("partition: sequence must be nonempty");
  for (Utility v : a) {
    if (v <= 0) throw InputError("partition: entries must be positive");
  }
  const Utility total = sum_of(a);
  if (total % 2 != 0) throw InputError("partition: odd sum");

  std::vector<Utility> c(2 * n, 0);
  c[0] = total;
  for (int k = 1; k <= n - 1; ++k) {
    // 1-based: c_2k = c_2k+1 = c_2k-1 - a_k
    c[2 * k - 1] = c[2 * k] = c[2 * k - 2] - a[k - 1];
  }
  c[2 * n - 1] = 0;
  if (c[2 * n - 2] - a[n - 1] != 0) {
    throw std::logic_error("partition: recurrence does not close at zero");
  }
  const Utility big_c = sum_of(c);
  GadgetInstance g{GadgetKind::kPartition,
                   Instance(2, numbered("item", 2 * n), {c, c}),
                   DecisionProblem{Objective::kEgalitarian, Mode::kPossible, big_c / 2,
                                   PolicyClass::kRecursivelyBalanced},
                   std::nullopt,
                   {},
                   a,
                   {}};
  if (n <= 24) {
    if (auto cert = find_partition_certificate(a)) g.certificate = *cert;
  }
  return g;
}

GadgetInstance gen_equipartition_balanced(const std::vector<Utility>& a) {
  const int n = static_cast<int>(a.size());
  if (n < 2 || n % 2 != 0) {
    throw InputError("equipartition: sequence length must be even and nonzero");
  }
  require_nonnegative(a, "equipartition");
  const Utility total = sum_of(a);
  if (total % 2 != 0) throw InputError("equipartition: odd sum");
  GadgetInstance g{GadgetKind::kEquiPartition,
                   Instance(2, numbered("item", n), {a, a}),
                   DecisionProblem{Objective::kEgalitarian, Mode::kPossible, total / 2,
                                   PolicyClass::kBalanced},
                   std::nullopt,
                   {},
                   a,
                   {}};
  if (n <= 24) {
    if (auto cert = find_equipartition_certificate(a)) g.certificate = *cert;
  }
  return g;
}

GadgetInstance topk_welfare_transform(const std::vector<std::vector<int>>& rankings,
                                      int k, TopKMode mode, PolicyClass c) {
  const int n = static_cast<int>(rankings.size());
  if (n < 1) throw InputError("topk: need at least one agent");
  const int m = static_cast<int>(rankings[0].size());
  for (int a = 0; a < n; ++a) {
    if (!is_permutation_of(rankings[a], m)) {
      throw InputError("topk: ranking " + std::to_string(a + 1) +
                       " is not a permutation of the items");
    }
  }
  if (k < 1 || k > m) throw InputError("topk: k must lie in 1..m");
  if (c != PolicyClass::kRecursivelyBalanced && c != PolicyClass::kBalancedAlternating) {
    throw InputError("topk: class must be recursively-balanced or balanced-alternating");
  }
  if (m % n != 0) throw InputError("topk: item count must be a multiple of agent count");

  const Utility kk = k;
  const Utility mm = m;
  const bool util = mode == TopKMode::kPossibleUtil || mode == TopKMode::kNecessaryUtil;
  Utility top_value = 0, other_value = 0, threshold = 0;
  switch (mode) {
    case TopKMode::kPossibleEgal:
      top_value = kk * kk;
      other_value = kk * kk * kk;
      threshold = kk * kk * kk;
      break;
    case TopKMode::kNecessaryEgal:
      // k per top item: the full top-k set is worth k^2 in total.
      top_value = kk;
      other_value = kk * kk * kk;
      threshold = kk * kk;
      break;
    case TopKMode::kPossibleUtil:
    case TopKMode::kNecessaryUtil:
      top_value = mm * kk * kk;
      other_value = kk;
      threshold = mm * kk * kk * kk;
      break;
  }
  std::vector<std::vector<Utility>> util_rows(n, std::vector<Utility>(m, other_value));
  std::fill(util_rows[0].begin(), util_rows[0].end(), 0);
  for (int i = 0; i < k; ++i) util_rows[0][rankings[0][i]] = top_value;

  const Mode query_mode = (mode == TopKMode::kPossibleEgal || mode == TopKMode::kPossibleUtil)
                              ? Mode::kPossible
                              : Mode::kNecessary;
  GadgetInstance g{GadgetKind::kTopK,
                   Instance(n, numbered("item", m), std::move(util_rows), rankings),
                   DecisionProblem{util ? Objective::kUtilitarian : Objective::kEgalitarian,
                                   query_mode, threshold, c},
                   std::nullopt,
                   {},
                   {},
                   TopKParams{rankings, k, mode}};
  return g;
}

std::optional<MatchingCertificate> find_matching_certificate(const ThreeDmParams& p) {
  const int n = static_cast<int>(p.x.size());
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    // The small item for agent i is forced up to equal z values.
    std::vector<bool> used(n, false);
    std::vector<int> pi(n, -1);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      const Utility need = p.target - p.x[i] - p.y[sigma[i]];
      ok = false;
      for (int j = 0; j < n; ++j) {
        if (!used[j] && p.z[j] == need) {
          used[j] = true;
          pi[i] = j;
          ok = true;
          break;
        }
      }
    }
    if (ok) return MatchingCertificate{sigma, pi};
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return std::nullopt;
}

std::optional<SubsetCertificate> find_partition_certificate(const std::vector<Utility>& a) {
  const int n = static_cast<int>(a.size());
  const Utility total = sum_of(a);
  if (total % 2 != 0) return std::nullopt;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    Utility s = 0;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1) s += a[i];
    }
    if (s * 2 != total) continue;
    SubsetCertificate cert;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1) cert.indices.push_back(i);
    }
    return cert;
  }
  return std::nullopt;
}

std::optional<SubsetCertificate> find_equipartition_certificate(
    const std::vector<Utility>& a) {
  const int n = static_cast<int>(a.size());
  const Utility total = sum_of(a);
  if (total % 2 != 0 || n % 2 != 0) return std::nullopt;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (std::popcount(mask) != n / 2) continue;
    Utility s = 0;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1) s += a[i];
    }
    if (s * 2 != total) continue;
    SubsetCertificate cert;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1) cert.indices.push_back(i);
    }
    return cert;
  }
  return std::nullopt;
}

bool verify_witness(const GadgetInstance& g, const Witness& w) {
  const auto& inst = g.instance;
  switch (g.kind) {
    case GadgetKind::kNumerical3dm: {
      const auto& p = g.three_dm;
      const int n = static_cast<int>(p.x.size());
      if (const auto* cert = std::get_if<MatchingCertificate>(&w)) {
        if (!is_permutation_of(cert->sigma, n) || !is_permutation_of(cert->pi, n)) {
          return false;
        }
        for (int i = 0; i < n; ++i) {
          if (p.x[i] + p.y[cert->sigma[i]] + p.z[cert->pi[i]] != p.target) return false;
        }
        return true;
      }
      if (const auto* policy = std::get_if<Policy>(&w)) {
        if (static_cast<int>(policy->size()) != inst.num_items()) return false;
        if (!is_member(*policy, PolicyClass::kAll, n)) return false;
        const auto alloc = simulate(inst, *policy);
        const auto report = welfare(inst, alloc);
        std::vector<int> bigs(n, 0), smalls(n, 0);
        for (int j = 0; j < n; ++j) ++bigs[alloc.owner[j]];
        for (int j = n; j < 2 * n; ++j) ++smalls[alloc.owner[j]];
        for (int i = 0; i < n; ++i) {
          if (bigs[i] != 1 || smalls[i] != 1 || report.per_agent[i] != g.query.threshold) {
            return false;
          }
        }
        return true;
      }
      throw InputError("verify: a 3dm gadget takes a matching certificate or a policy");
    }
    case GadgetKind::kPartition: {
      const auto& a = g.sequence;
      const Utility half = sum_of(a) / 2;
      if (const auto* cert = std::get_if<SubsetCertificate>(&w)) {
        if (!valid_subset(cert->indices, static_cast<int>(a.size()))) return false;
        Utility s = 0;
        for (int i : cert->indices) s += a[i];
        return s == half;
      }
      if (const auto* policy = std::get_if<Policy>(&w)) {
        if (static_cast<int>(policy->size()) != inst.num_items()) return false;
        if (!is_recursively_balanced(policy->turns, 2)) return false;
        // Rounds where agent 1 picks first.
        Utility s = 0;
        for (std::size_t r = 0; r < a.size(); ++r) {
          if (policy->turns[2 * r] == 0) s += a[r];
        }
        return s == half;
      }
      throw InputError("verify: a partition gadget takes an index set or a policy");
    }
    case GadgetKind::kEquiPartition: {
      const auto& a = g.sequence;
      if (const auto* cert = std::get_if<SubsetCertificate>(&w)) {
        if (!valid_subset(cert->indices, static_cast<int>(a.size()))) return false;
        if (cert->indices.size() * 2 != a.size()) return false;
        Utility s = 0;
        for (int i : cert->indices) s += a[i];
        return s * 2 == sum_of(a);
      }
      if (const auto* policy = std::get_if<Policy>(&w)) return meets_query(g, *policy);
      throw InputError("verify: an equipartition gadget takes an index set or a policy");
    }
    case GadgetKind::kTopK: {
      if (const auto* policy = std::get_if<Policy>(&w)) return meets_query(g, *policy);
      throw InputError("verify: a top-k gadget takes a policy");
    }
  }
  return false;
}

}  // namespace seqalloc::reductions
