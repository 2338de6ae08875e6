#include "seqalloc/model.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace seqalloc {

namespace {

bool is_permutation_of_range(const std::vector<int>& perm, int m) {
  if (static_cast<int>(perm.size()) != m) return false;
  std::vector<bool> seen(m, false);
  for (int v : perm) {
    if (v < 0 || v >= m || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

std::vector<int> identity_order(int m) {
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

std::vector<std::vector<int>> compute_rankings(
    int n, const std::vector<std::vector<Utility>>& u,
    const std::vector<std::vector<int>>& tie_break,
    const std::vector<bool>& dummy) {
  const int m = static_cast<int>(dummy.size());
  std::vector<std::vector<int>> rankings(n);
  for (int a = 0; a < n; ++a) {
    std::vector<int> position(m);
    for (int p = 0; p < m; ++p) position[tie_break[a][p]] = p;
    auto& r = rankings[a];
    r = identity_order(m);
    std::sort(r.begin(), r.end(), [&](int x, int y) {
      if (u[a][x] != u[a][y]) return u[a][x] > u[a][y];
      if (dummy[x] != dummy[y]) return !dummy[x];
      return position[x] < position[y];
    });
  }
  return rankings;
}

}  // namespace

Instance::Instance(int n_agents, std::vector<std::string> item_labels,
                   std::vector<std::vector<Utility>> utilities,
                   std::optional<std::vector<std::vector<int>>> tie_break,
                   std::vector<bool> dummy)
    : n_agents_(n_agents),
      labels_(std::move(item_labels)),
      utilities_(std::move(utilities)),
      dummy_(std::move(dummy)) {
  if (n_agents_ < 1) throw InputError("agents: must be a positive integer");
  const int m = num_items();
  if (static_cast<int>(utilities_.size()) != n_agents_) {
    throw InputError("utilities: expected " + std::to_string(n_agents_) +
                     " rows, got " + std::to_string(utilities_.size()));
  }
  for (int a = 0; a < n_agents_; ++a) {
    if (static_cast<int>(utilities_[a].size()) != m) {
      throw InputError("utilities[" + std::to_string(a) +
                       "]: ragged matrix (expected " + std::to_string(m) +
                       " entries, got " + std::to_string(utilities_[a].size()) +
                       ")");
    }
    for (int j = 0; j < m; ++j) {
      if (utilities_[a][j] < 0) {
        throw InputError("utilities[" + std::to_string(a) + "][" +
                         std::to_string(j) + "]: negative utility");
      }
    }
  }
  {
    std::set<std::string_view> seen;
    for (int j = 0; j < m; ++j) {
      if (!seen.insert(labels_[j]).second) {
        throw InputError("items[" + std::to_string(j) + "]: duplicate label '" +
                         labels_[j] + "'");
      }
    }
  }
  if (dummy_.empty()) dummy_.assign(m, false);
  if (static_cast<int>(dummy_.size()) != m) {
    throw InputError("dummy flags: expected one flag per item");
  }
  for (int j = 0; j < m; ++j) {
    if (!dummy_[j]) continue;
    for (int a = 0; a < n_agents_; ++a) {
      if (utilities_[a][j] != 0) {
        throw InputError("utilities[" + std::to_string(a) + "][" +
                         std::to_string(j) + "]: dummy item must have utility 0");
      }
    }
  }
  if (tie_break) {
    tie_break_ = std::move(*tie_break);
    if (static_cast<int>(tie_break_.size()) != n_agents_) {
      throw InputError("tie_break: expected " + std::to_string(n_agents_) +
                       " rows, got " + std::to_string(tie_break_.size()));
    }
    for (int a = 0; a < n_agents_; ++a) {
      if (!is_permutation_of_range(tie_break_[a], m)) {
        throw InputError("tie_break[" + std::to_string(a) +
                         "]: not a permutation of the items");
      }
    }
  } else {
    tie_break_.assign(n_agents_, identity_order(m));
  }
  rankings_ = compute_rankings(n_agents_, utilities_, tie_break_, dummy_);
}

int Instance::num_dummies() const {
  return static_cast<int>(std::count(dummy_.begin(), dummy_.end(), true));
}

Utility Instance::max_utility() const {
  Utility k = 0;
  for (const auto& row : utilities_)
    for (Utility v : row) k = std::max(k, v);
  return k;
}

Utility Instance::total_utility(int agent) const {
  const auto& row = utilities_[agent];
  return std::accumulate(row.begin(), row.end(), Utility{0});
}

PreferenceProfile derive_rankings(const Instance& inst) {
  return PreferenceProfile{inst.rankings()};
}

Instance pad_to_multiple(const Instance& inst) {
  const int n = inst.num_agents();
  const int m = inst.num_items();
  const int extra = (n - m % n) % n;
  if (extra == 0) return inst;

  auto labels = inst.labels();
  auto utilities = inst.utilities();
  std::vector<bool> dummy(m + extra, false);
  for (int j = 0; j < m; ++j) dummy[j] = inst.is_dummy(j);
  const std::set<std::string> taken(labels.begin(), labels.end());
  int next = inst.num_dummies();
  for (int d = 0; d < extra; ++d) {
    std::string label;
    do {
      label = "dummy" + std::to_string(++next);
    } while (taken.count(label));
    labels.push_back(std::move(label));
    dummy[m + d] = true;
  }
  for (auto& row : utilities) row.resize(m + extra, 0);
  std::vector<std::vector<int>> tie_break(n);
  for (int a = 0; a < n; ++a) {
    tie_break[a] = inst.tie_break(a);
    for (int d = 0; d < extra; ++d) tie_break[a].push_back(m + d);
  }
  return Instance(n, std::move(labels), std::move(utilities),
                  std::move(tie_break), std::move(dummy));
}

Policy parse_policy(std::string_view text, int n_agents) {
  Policy p;
  auto push = [&](std::string_view tok) {
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (tok.empty()) throw InputError("policy: empty entry");
    int v = 0;
    for (char c : tok) {
      if (c < '0' || c > '9') {
        throw InputError("policy: invalid entry '" + std::string(tok) + "'");
      }
      v = v * 10 + (c - '0');
      if (v > n_agents) break;
    }
    if (v < 1 || v > n_agents) {
      throw InputError("policy: agent index " + std::string(tok) +
                       " out of range 1.." + std::to_string(n_agents));
    }
    p.turns.push_back(v - 1);
  };
  if (text.empty()) return p;
  if (text.find(',') == std::string_view::npos && n_agents <= 9) {
    for (std::size_t i = 0; i < text.size(); ++i) push(text.substr(i, 1));
    return p;
  }
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    push(text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                          : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return p;
}

std::string format_policy(const Policy& p) {
  std::string out;
  for (std::size_t i = 0; i < p.turns.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(p.turns[i] + 1);
  }
  return out;
}

std::string_view to_string(PolicyClass c) {
  switch (c) {
    case PolicyClass::kAll: return "all";
    case PolicyClass::kBalanced: return "balanced";
    case PolicyClass::kRecursivelyBalanced: return "recursively-balanced";
    case PolicyClass::kBalancedAlternating: return "balanced-alternating";
  }
  return "?";
}

PolicyClass parse_policy_class(std::string_view text) {
  if (text == "all") return PolicyClass::kAll;
  if (text == "balanced") return PolicyClass::kBalanced;
  if (text == "recursively-balanced" || text == "rb")
    return PolicyClass::kRecursivelyBalanced;
  if (text == "balanced-alternating" || text == "ba")
    return PolicyClass::kBalancedAlternating;
  throw InputError("unknown policy class '" + std::string(text) + "'");
}

bool is_balanced(std::span<const int> turns, int n_agents) {
  const int m = static_cast<int>(turns.size());
  if (m % n_agents != 0) return false;
  std::vector<int> count(n_agents, 0);
  for (int a : turns) {
    if (a < 0 || a >= n_agents) return false;
    ++count[a];
  }
  return std::all_of(count.begin(), count.end(),
                     [&](int c) { return c == m / n_agents; });
}

bool is_recursively_balanced(std::span<const int> turns, int n_agents) {
  const int m = static_cast<int>(turns.size());
  if (m % n_agents != 0) return false;
  std::vector<int> seen_in_round(n_agents, -1);
  for (int i = 0; i < m; ++i) {
    const int a = turns[i];
    const int round = i / n_agents;
    if (a < 0 || a >= n_agents || seen_in_round[a] == round) return false;
    seen_in_round[a] = round;
  }
  return true;
}

bool is_balanced_alternating(std::span<const int> turns, int n_agents) {
  if (!is_recursively_balanced(turns, n_agents)) return false;
  const int m = static_cast<int>(turns.size());
  for (int i = n_agents; i < m; ++i) {
    const int round_start = i - i % n_agents;
    const int offset = i - round_start;
    // Each round is the previous round reversed.
    if (turns[i] != turns[round_start - 1 - offset]) return false;
  }
  return true;
}

bool is_member(const Policy& p, PolicyClass c, int n_agents) {
  switch (c) {
    case PolicyClass::kAll:
      return std::all_of(p.turns.begin(), p.turns.end(),
                         [&](int a) { return a >= 0 && a < n_agents; });
    case PolicyClass::kBalanced: return is_balanced(p.turns, n_agents);
    case PolicyClass::kRecursivelyBalanced:
      return is_recursively_balanced(p.turns, n_agents);
    case PolicyClass::kBalancedAlternating:
      return is_balanced_alternating(p.turns, n_agents);
  }
  return false;
}

std::vector<PolicyClass> classify_policy(const Policy& p, int n_agents) {
  std::vector<PolicyClass> out;
  for (auto c : {PolicyClass::kAll, PolicyClass::kBalanced,
                 PolicyClass::kRecursivelyBalanced,
                 PolicyClass::kBalancedAlternating}) {
    if (is_member(p, c, n_agents)) out.push_back(c);
  }
  return out;
}

std::vector<PolicyClass> classify_policy(const Policy& p, const Instance& inst) {
  if (static_cast<int>(p.size()) != inst.num_items()) {
    throw InputError("policy length " + std::to_string(p.size()) +
                     " does not match item count " +
                     std::to_string(inst.num_items()));
  }
  return classify_policy(p, inst.num_agents());
}

std::vector<std::vector<int>> Allocation::bundles(int n_agents) const {
  std::vector<std::vector<int>> out(n_agents);
  for (int j = 0; j < num_items(); ++j) out[owner[j]].push_back(j);
  return out;
}

std::vector<int> Allocation::bundle_sizes(int n_agents) const {
  std::vector<int> sizes(n_agents, 0);
  for (int a : owner) ++sizes[a];
  return sizes;
}

WelfareReport welfare(const Instance& inst, const Allocation& alloc) {
  if (alloc.num_items() != inst.num_items()) {
    throw InputError("allocation does not cover every item");
  }
  WelfareReport w;
  w.per_agent.assign(inst.num_agents(), 0);
  for (int j = 0; j < alloc.num_items(); ++j) {
    const int a = alloc.owner[j];
    if (a < 0 || a >= inst.num_agents()) {
      throw InputError("allocation: item " + std::to_string(j + 1) +
                       " has invalid owner");
    }
    w.per_agent[a] += inst.utility(a, j);
  }
  w.utilitarian = std::accumulate(w.per_agent.begin(), w.per_agent.end(),
                                  Utility{0});
  w.egalitarian = *std::min_element(w.per_agent.begin(), w.per_agent.end());
  return w;
}

std::string_view to_string(Objective o) {
  return o == Objective::kUtilitarian ? "utilitarian" : "egalitarian";
}
std::string_view to_string(Mode m) {
  return m == Mode::kPossible ? "possible" : "necessary";
}
std::string_view to_string(Direction d) {
  return d == Direction::kMax ? "max" : "min";
}

Objective parse_objective(std::string_view text) {
  if (text == "utilitarian") return Objective::kUtilitarian;
  if (text == "egalitarian") return Objective::kEgalitarian;
  throw InputError("unknown objective '" + std::string(text) + "'");
}
Mode parse_mode(std::string_view text) {
  if (text == "possible") return Mode::kPossible;
  if (text == "necessary") return Mode::kNecessary;
  throw InputError("unknown mode '" + std::string(text) + "'");
}
Direction parse_direction(std::string_view text) {
  if (text == "max") return Direction::kMax;
  if (text == "min") return Direction::kMin;
  throw InputError("unknown direction '" + std::string(text) + "'");
}

Utility objective_value(const WelfareReport& w, Objective o) {
  return o == Objective::kUtilitarian ? w.utilitarian : w.egalitarian;
}

Instance load_instance(std::string_view document) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("instance: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("instance: expected a JSON object");

  auto as_int = [](const json& v, const std::string& where) -> std::int64_t {
    if (!v.is_number_integer()) throw InputError(where + ": expected an integer");
    return v.get<std::int64_t>();
  };

  if (!doc.contains("agents")) throw InputError("agents: missing field");
  const auto n = as_int(doc["agents"], "agents");
  if (n < 1) throw InputError("agents: must be a positive integer");

  if (!doc.contains("items") || !doc["items"].is_array()) {
    throw InputError("items: expected an array of strings");
  }
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < doc["items"].size(); ++j) {
    const auto& v = doc["items"][j];
    if (!v.is_string()) {
      throw InputError("items[" + std::to_string(j) + "]: expected a string");
    }
    labels.push_back(v.get<std::string>());
  }

  if (!doc.contains("utilities") || !doc["utilities"].is_array()) {
    throw InputError("utilities: expected an array of rows");
  }
  std::vector<std::vector<Utility>> utilities;
  for (std::size_t a = 0; a < doc["utilities"].size(); ++a) {
    const auto& row = doc["utilities"][a];
    const auto where = "utilities[" + std::to_string(a) + "]";
    if (!row.is_array()) throw InputError(where + ": expected an array");
    std::vector<Utility> r;
    for (std::size_t j = 0; j < row.size(); ++j) {
      r.push_back(as_int(row[j], where + "[" + std::to_string(j) + "]"));
    }
    utilities.push_back(std::move(r));
  }

  std::optional<std::vector<std::vector<int>>> tie_break;
  if (doc.contains("tie_break") && !doc["tie_break"].is_null()) {
    const auto& tb = doc["tie_break"];
    if (!tb.is_array()) throw InputError("tie_break: expected an array of rows");
    tie_break.emplace();
    for (std::size_t a = 0; a < tb.size(); ++a) {
      const auto where = "tie_break[" + std::to_string(a) + "]";
      if (!tb[a].is_array()) throw InputError(where + ": expected an array");
      std::vector<int> r;
      for (std::size_t p = 0; p < tb[a].size(); ++p) {
        r.push_back(static_cast<int>(
                        as_int(tb[a][p], where + "[" + std::to_string(p) + "]")) -
                    1);
      }
      tie_break->push_back(std::move(r));
    }
  }
  return Instance(static_cast<int>(n), std::move(labels), std::move(utilities),
                  std::move(tie_break));
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_instance(ss.str());
}

}  // namespace seqalloc
