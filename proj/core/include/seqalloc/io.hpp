#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "seqalloc/model.hpp"
#include "seqalloc/oracle.hpp"
#include "seqalloc/reductions.hpp"

namespace seqalloc::io {

using Json = nlohmann::ordered_json;

// Instance document in the same format load_instance reads.
Json instance_json(const Instance& inst);

// Item label -> 1-based agent.
Json allocation_json(const Instance& inst, const Allocation& alloc);
Allocation allocation_from_json(const Instance& inst, const Json& doc);

Json welfare_json(const WelfareReport& w);
Json query_json(const DecisionProblem& q);
Json distribution_json(const oracle::WelfareDistribution& d);
Json estimate_json(const oracle::MonteCarloEstimate& e);

// Sidecar document: kind, source parameters, query, optional certificate and
// the embedded instance. Certificates and rankings use 1-based indices.
Json gadget_json(const reductions::GadgetInstance& g);
reductions::GadgetInstance gadget_from_json(const Json& doc);

Json certificate_json(const reductions::Certificate& c);

// A policy string, or a JSON certificate {"sigma":[...],"pi":[...]} /
// {"indices":[...]} with 1-based entries.
reductions::Witness parse_witness(std::string_view text, const reductions::GadgetInstance& g);

// Parses "1,2,3" into integers.
std::vector<Utility> parse_int_list(std::string_view text);

}  // namespace seqalloc::io
