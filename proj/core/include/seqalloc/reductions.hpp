#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "seqalloc/model.hpp"

namespace seqalloc::reductions {

enum class GadgetKind { kNumerical3dm, kPartition, kEquiPartition, kTopK };
std::string_view to_string(GadgetKind k);
GadgetKind parse_gadget_kind(std::string_view text);

// Permutations (0-based) pairing agent i with big item sigma[i] and small
// item pi[i].
struct MatchingCertificate {
  std::vector<int> sigma;
  std::vector<int> pi;
};

// 0-based indices into the source sequence a.
struct SubsetCertificate {
  std::vector<int> indices;
};

using Certificate = std::variant<MatchingCertificate, SubsetCertificate>;
using Witness = std::variant<MatchingCertificate, SubsetCertificate, Policy>;

struct ThreeDmParams {
  std::vector<Utility> x, y, z;
  Utility target = 0;
  int num_items = 0;
};

enum class TopKMode { kPossibleEgal, kPossibleUtil, kNecessaryEgal, kNecessaryUtil };
std::string_view to_string(TopKMode m);
TopKMode parse_topk_mode(std::string_view text);

struct TopKParams {
  std::vector<std::vector<int>> rankings;  // 0-based items, best first
  int k = 0;
  TopKMode mode = TopKMode::kPossibleEgal;
};

struct GadgetInstance {
  GadgetKind kind;
  Instance instance;
  DecisionProblem query;
  std::optional<Certificate> certificate;

  // Source data, populated according to kind.
  ThreeDmParams three_dm;
  std::vector<Utility> sequence;  // Partition / Equi-Partition input a
  TopKParams topk;
};

// n agents, n "big" items worth u + x_i + y_j to agent i, n "small" items
// worth z_j to everyone, num_items - 2n zero items, with u = 1 + sum(z).
// Asks whether egalitarian welfare u + target is possible over all policies.
GadgetInstance gen_numerical_3dm(const std::vector<Utility>& x,
                                 const std::vector<Utility>& y,
                                 const std::vector<Utility>& z, Utility target,
                                 int num_items);

// Two agents with identical utilities c_1 = 2B, c_2k = c_2k+1 = c_2k-1 - a_k,
// c_2n = 0. Asks for egalitarian welfare sum(c)/2 over recursively balanced
// policies.
GadgetInstance gen_partition_rb(const std::vector<Utility>& a);

// Two agents with identical utilities a; egalitarian welfare sum(a)/2 over
// balanced policies.
GadgetInstance gen_equipartition_balanced(const std::vector<Utility>& a);

// Agent 1 gets a large value on its top-k items and zero elsewhere; every
// other agent values every item uniformly. Rankings are preserved through
// tie-break orders.
GadgetInstance topk_welfare_transform(const std::vector<std::vector<int>>& rankings,
                                      int k, TopKMode mode, PolicyClass c);

// Exhaustive searches for a source-problem certificate.
std::optional<MatchingCertificate> find_matching_certificate(const ThreeDmParams& p);
std::optional<SubsetCertificate> find_partition_certificate(const std::vector<Utility>& a);
std::optional<SubsetCertificate> find_equipartition_certificate(
    const std::vector<Utility>& a);

// Checks a certificate against the source problem, or a policy against the
// gadget. Throws InputError on a shape mismatch.
bool verify_witness(const GadgetInstance& g, const Witness& w);

}  // namespace seqalloc::reductions
