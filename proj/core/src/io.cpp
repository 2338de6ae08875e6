#include "seqalloc/io.hpp"

#include <charconv>

namespace seqalloc::io {

namespace {

std::vector<int> to_one_based(const std::vector<int>& v) {
  std::vector<int> out(v);
  for (int& x : out) ++x;
  return out;
}

std::vector<int> from_one_based(const Json& arr, const char* where) {
  if (!arr.is_array()) throw InputError(std::string(where) + ": expected an array");
  std::vector<int> out;
  for (const auto& v : arr) {
    if (!v.is_number_integer()) {
      throw InputError(std::string(where) + ": expected integers");
    }
    out.push_back(v.get<int>() - 1);
  }
  return out;
}

std::vector<Utility> utility_list(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw InputError(std::string("gadget: missing array '") + key + "'");
  }
  return doc[key].get<std::vector<Utility>>();
}

}  // namespace

Json instance_json(const Instance& inst) {
  Json doc;
  doc["agents"] = inst.num_agents();
  doc["items"] = inst.labels();
  doc["utilities"] = inst.utilities();
  Json tb = Json::array();
  for (int a = 0; a < inst.num_agents(); ++a) tb.push_back(to_one_based(inst.tie_break(a)));
  doc["tie_break"] = std::move(tb);
  return doc;
}

Json allocation_json(const Instance& inst, const Allocation& alloc) {
  Json doc = Json::object();
  for (int j = 0; j < alloc.num_items(); ++j) doc[inst.label(j)] = alloc.owner[j] + 1;
  return doc;
}

Allocation allocation_from_json(const Instance& inst, const Json& doc) {
  if (!doc.is_object()) throw InputError("allocation: expected a JSON object");
  Allocation alloc{std::vector<int>(inst.num_items(), -1)};
  for (const auto& [label, agent] : doc.items()) {
    const auto& labels = inst.labels();
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw InputError("allocation: unknown item '" + label + "'");
    if (!agent.is_number_integer()) {
      throw InputError("allocation: agent for '" + label + "' must be an integer");
    }
    const int a = agent.get<int>() - 1;
    if (a < 0 || a >= inst.num_agents()) {
      throw InputError("allocation: agent for '" + label + "' out of range");
    }
    alloc.owner[it - labels.begin()] = a;
  }
  for (int j = 0; j < inst.num_items(); ++j) {
    if (alloc.owner[j] < 0) {
      throw InputError("allocation: item '" + inst.label(j) + "' is unassigned");
    }
  }
  return alloc;
}

Json welfare_json(const WelfareReport& w) {
  Json doc;
  doc["per_agent"] = w.per_agent;
  doc["utilitarian"] = w.utilitarian;
  doc["egalitarian"] = w.egalitarian;
  return doc;
}

Json query_json(const DecisionProblem& q) {
  Json doc;
  doc["objective"] = to_string(q.objective);
  doc["mode"] = to_string(q.mode);
  doc["class"] = to_string(q.policy_class);
  doc["threshold"] = q.threshold;
  return doc;
}

Json distribution_json(const oracle::WelfareDistribution& d) {
  Json doc;
  doc["objective"] = to_string(d.objective);
  doc["class"] = to_string(d.policy_class);
  doc["total"] = d.total;
  Json entries = Json::object();
  for (const auto& [value, count] : d.entries) entries[std::to_string(value)] = count;
  doc["entries"] = std::move(entries);
  doc["mean"] = d.mean();
  doc["min"] = d.min();
  doc["max"] = d.max();
  return doc;
}

Json estimate_json(const oracle::MonteCarloEstimate& e) {
  Json doc;
  doc["samples"] = e.samples;
  doc["hits"] = e.hits;
  doc["estimate"] = e.estimate;
  doc["wilson_95"] = {e.wilson_low, e.wilson_high};
  return doc;
}

Json certificate_json(const reductions::Certificate& c) {
  Json doc;
  if (const auto* m = std::get_if<reductions::MatchingCertificate>(&c)) {
    doc["sigma"] = to_one_based(m->sigma);
    doc["pi"] = to_one_based(m->pi);
  } else {
    doc["indices"] = to_one_based(std::get<reductions::SubsetCertificate>(c).indices);
  }
  return doc;
}

Json gadget_json(const reductions::GadgetInstance& g) {
  using reductions::GadgetKind;
  Json doc;
  doc["kind"] = to_string(g.kind);
  Json params;
  switch (g.kind) {
    case GadgetKind::kNumerical3dm:
      params["x"] = g.three_dm.x;
      params["y"] = g.three_dm.y;
      params["z"] = g.three_dm.z;
      params["t"] = g.three_dm.target;
      params["m"] = g.three_dm.num_items;
      break;
    case GadgetKind::kPartition:
    case GadgetKind::kEquiPartition:
      params["a"] = g.sequence;
      break;
    case GadgetKind::kTopK: {
      Json rankings = Json::array();
      for (const auto& r : g.topk.rankings) rankings.push_back(to_one_based(r));
      params["rankings"] = std::move(rankings);
      params["k"] = g.topk.k;
      params["mode"] = to_string(g.topk.mode);
      params["class"] = to_string(g.query.policy_class);
      break;
    }
  }
  doc["params"] = std::move(params);
  doc["query"] = query_json(g.query);
  doc["certificate"] = g.certificate ? certificate_json(*g.certificate) : Json(nullptr);
  doc["instance"] = instance_json(g.instance);
  return doc;
}

reductions::GadgetInstance gadget_from_json(const Json& doc) {
  using reductions::GadgetKind;
  if (!doc.is_object() || !doc.contains("kind") || !doc.contains("params")) {
    throw InputError("gadget: expected an object with 'kind' and 'params'");
  }
  const auto kind = reductions::parse_gadget_kind(doc["kind"].get<std::string>());
  const auto& p = doc["params"];
  // Regenerating from the source parameters keeps the instance and query
  // consistent with the generator.
  switch (kind) {
    case GadgetKind::kNumerical3dm:
      return reductions::gen_numerical_3dm(utility_list(p, "x"), utility_list(p, "y"),
                                           utility_list(p, "z"), p.at("t").get<Utility>(),
                                           p.at("m").get<int>());
    case GadgetKind::kPartition:
      return reductions::gen_partition_rb(utility_list(p, "a"));
    case GadgetKind::kEquiPartition:
      return reductions::gen_equipartition_balanced(utility_list(p, "a"));
    case GadgetKind::kTopK: {
      std::vector<std::vector<int>> rankings;
      for (const auto& r : p.at("rankings")) rankings.push_back(from_one_based(r, "rankings"));
      return reductions::topk_welfare_transform(
          rankings, p.at("k").get<int>(),
          reductions::parse_topk_mode(p.at("mode").get<std::string>()),
          parse_policy_class(p.at("class").get<std::string>()));
    }
  }
  throw InputError("gadget: unknown kind");
}

reductions::Witness parse_witness(std::string_view text,
                                  const reductions::GadgetInstance& g) {
  std::size_t first = text.find_first_not_of(" \t\n");
  if (first != std::string_view::npos && text[first] == '{') {
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw InputError(std::string("witness: malformed JSON: ") + e.what());
    }
    if (doc.contains("sigma") || doc.contains("pi")) {
      return reductions::MatchingCertificate{from_one_based(doc.at("sigma"), "sigma"),
                                             from_one_based(doc.at("pi"), "pi")};
    }
    if (doc.contains("indices")) {
      return reductions::SubsetCertificate{from_one_based(doc["indices"], "indices")};
    }
    throw InputError("witness: expected 'sigma'/'pi' or 'indices'");
  }
  return parse_policy(text, g.instance.num_agents());
}

std::vector<Utility> parse_int_list(std::string_view text) {
  std::vector<Utility> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    auto tok = text.substr(start, comma - start);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    Utility v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw InputError("expected a comma-separated integer list, got '" +
                       std::string(text) + "'");
    }
    out.push_back(v);
    start = comma + 1;
  }
  return out;
}

}  // namespace seqalloc::io
