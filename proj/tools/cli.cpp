#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "seqalloc/io.hpp"
#include "seqalloc/mechanism.hpp"
#include "seqalloc/oracle.hpp"
#include "seqalloc/reductions.hpp"
#include "seqalloc/solvers.hpp"

namespace seqalloc::cli {

namespace {

using io::Json;

class VerificationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

// Re-simulates a policy and checks the reported value before printing.
WelfareReport verified(const Instance& inst, const Policy& p,
                       std::optional<Objective> objective = std::nullopt,
                       std::optional<Utility> value = std::nullopt) {
  const auto w = welfare(inst, simulate(inst, p));
  if (objective && value && objective_value(w, *objective) != *value) {
    throw VerificationError("witness " + format_policy(p) + " re-simulates to " +
                            std::to_string(objective_value(w, *objective)) +
                            ", reported " + std::to_string(*value));
  }
  return w;
}

Json policy_report(const Instance& inst, const Policy& p, const WelfareReport& w) {
  Json doc;
  doc["policy"] = format_policy(p);
  doc["allocation"] = io::allocation_json(inst, simulate(inst, p));
  doc["welfare"] = io::welfare_json(w);
  return doc;
}

struct Common {
  std::string instance_file;
  std::string policy_class = "all";
  std::string objective = "utilitarian";
  std::uint64_t guard = oracle::kDefaultGuard;
  int jobs = 1;
  bool exact_only = false;

  SolveOptions solve_options() const {
    SolveOptions o;
    o.oracle.guard = guard;
    o.oracle.jobs = std::max(1, jobs);
    o.exact_only = exact_only;
    return o;
  }
};

void add_instance(CLI::App* cmd, Common& c) {
  cmd->add_option("-i,--instance", c.instance_file, "Instance JSON file")->required();
}
void add_class(CLI::App* cmd, Common& c) {
  cmd->add_option("--class", c.policy_class,
                  "all | balanced | recursively-balanced | balanced-alternating")
      ->required();
}
void add_objective(CLI::App* cmd, Common& c) {
  cmd->add_option("--objective", c.objective, "utilitarian | egalitarian")->required();
}
void add_oracle_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--guard", c.guard, "Maximum number of policies to enumerate");
  cmd->add_option("--jobs", c.jobs, "Worker threads for exhaustive search");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequential allocation welfare toolkit"};
  app.require_subcommand(1);
  Common common;

  // simulate
  std::string policy_text;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run sincere picking for a policy");
  add_instance(simulate_cmd, common);
  simulate_cmd->add_option("-p,--policy", policy_text, "Policy, e.g. 1,2,2,1")->required();

  // solve
  std::string direction = "max";
  auto* solve_cmd = app.add_subcommand("solve", "Optimal welfare over a policy class");
  add_instance(solve_cmd, common);
  add_class(solve_cmd, common);
  add_objective(solve_cmd, common);
  solve_cmd->add_option("--direction", direction, "max | min")->required();
  solve_cmd->add_flag("--exact-only", common.exact_only,
                      "Fail instead of falling back to exhaustive search");
  add_oracle_flags(solve_cmd, common);

  // decide
  std::string mode;
  Utility threshold = 0;
  auto* decide_cmd = app.add_subcommand("decide", "Possible / necessary welfare question");
  add_instance(decide_cmd, common);
  add_class(decide_cmd, common);
  add_objective(decide_cmd, common);
  decide_cmd->add_option("--mode", mode, "possible | necessary")->required();
  decide_cmd->add_option("-t,--threshold", threshold, "Welfare threshold")->required();
  decide_cmd->add_flag("--exact-only", common.exact_only,
                       "Fail instead of falling back to exhaustive search");
  add_oracle_flags(decide_cmd, common);

  // enumerate
  std::optional<std::uint64_t> limit;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "List the policies of a class");
  add_instance(enumerate_cmd, common);
  add_class(enumerate_cmd, common);
  enumerate_cmd->add_option("--limit", limit, "List at most this many policies");
  enumerate_cmd->add_option("--guard", common.guard, "Maximum class size");

  // distribution
  std::optional<Utility> dist_threshold;
  auto* dist_cmd = app.add_subcommand(
      "distribution", "Exact welfare distribution over balanced alternating policies");
  add_instance(dist_cmd, common);
  add_objective(dist_cmd, common);
  dist_cmd->add_option("-t,--threshold", dist_threshold, "Report P(welfare >= t)");
  dist_cmd->add_option("--guard", common.guard, "Maximum class size");

  // sample
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  auto* sample_cmd = app.add_subcommand(
      "sample", "Monte-Carlo estimate of P(welfare >= t) under a random alternating policy");
  add_instance(sample_cmd, common);
  add_objective(sample_cmd, common);
  sample_cmd->add_option("-t,--threshold", threshold, "Welfare threshold")->required();
  sample_cmd->add_option("--samples", samples, "Number of samples")->required();
  sample_cmd->add_option("--seed", seed, "Generator seed")->required();

  // generate
  auto* generate_cmd = app.add_subcommand("generate", "Build a hardness-reduction gadget");
  generate_cmd->require_subcommand(1);
  std::string output_prefix;
  std::string xs, ys, zs, as, rankings_text, topk_mode;
  Utility target = 0;
  int gadget_items = -1;
  int k = 0;
  auto* g3dm = generate_cmd->add_subcommand("3dm", "Numerical 3-dimensional matching");
  g3dm->add_option("--x", xs, "X multiset, comma-separated")->required();
  g3dm->add_option("--y", ys, "Y multiset")->required();
  g3dm->add_option("--z", zs, "Z multiset")->required();
  g3dm->add_option("-t,--target", target, "Target triple sum")->required();
  g3dm->add_option("-m,--items", gadget_items, "Item count (default 2n)");
  auto* gpart = generate_cmd->add_subcommand("partition", "Partition, recursively balanced");
  gpart->add_option("--a", as, "Sequence a, comma-separated")->required();
  auto* gequi = generate_cmd->add_subcommand("equipartition", "Equi-Partition, balanced");
  gequi->add_option("--a", as, "Sequence a, comma-separated")->required();
  auto* gtopk = generate_cmd->add_subcommand("topk", "Top-k set transform");
  gtopk->add_option("--rankings", rankings_text,
                    "Per-agent rankings, 1-based items; agents separated by ';'")
      ->required();
  gtopk->add_option("-k", k, "k")->required();
  gtopk->add_option("--mode", topk_mode,
                    "possible-egalitarian | possible-utilitarian | "
                    "necessary-egalitarian | necessary-utilitarian")
      ->required();
  gtopk->add_option("--class", common.policy_class,
                    "recursively-balanced | balanced-alternating")
      ->required();
  for (auto* g : {g3dm, gpart, gequi, gtopk}) {
    g->add_option("-o,--output", output_prefix,
                  "Write PREFIX.json (instance) and PREFIX.gadget.json");
  }

  // verify
  std::string gadget_file, witness_text;
  auto* verify_cmd = app.add_subcommand("verify", "Check a witness against a gadget");
  verify_cmd->add_option("-g,--gadget", gadget_file, "Gadget sidecar JSON")->required();
  verify_cmd->add_option("-w,--witness", witness_text,
                         "Policy, JSON certificate, or a file containing either")
      ->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    Json doc;
    int code = kOk;

    if (*simulate_cmd) {
      Instance inst = load_instance_file(common.instance_file);
      Policy p = parse_policy(policy_text, inst.num_agents());
      int padded = 0;
      if (static_cast<int>(p.size()) != inst.num_items()) {
        Instance padded_inst = pad_to_multiple(inst);
        if (static_cast<int>(p.size()) == padded_inst.num_items()) {
          padded = padded_inst.num_items() - inst.num_items();
          inst = std::move(padded_inst);
        }
      }
      const auto w = verified(inst, p);
      doc = policy_report(inst, p, w);
      Json classes = Json::array();
      for (auto c : classify_policy(p, inst)) classes.push_back(to_string(c));
      doc["classes"] = std::move(classes);
      doc["padded_items"] = padded;
    } else if (*solve_cmd) {
      const Instance inst = load_instance_file(common.instance_file);
      const auto cls = parse_policy_class(common.policy_class);
      const auto obj = parse_objective(common.objective);
      const auto dir = parse_direction(direction);
      const auto result = optimize(inst, cls, obj, dir, common.solve_options());
      const Instance work = prepare_for_class(inst, cls);
      const auto& opt = result.optimum;
      const auto w = verified(work, opt.witness, obj, opt.value);
      doc["class"] = to_string(cls);
      doc["objective"] = to_string(obj);
      doc["direction"] = to_string(dir);
      doc["value"] = opt.value;
      doc["policy"] = format_policy(opt.witness);
      doc["method"] = to_string(opt.method);
      doc["allocation"] = io::allocation_json(work, opt.witness_allocation);
      doc["welfare"] = io::welfare_json(w);
      doc["padded_items"] = result.padded_items;
    } else if (*decide_cmd) {
      const Instance inst = load_instance_file(common.instance_file);
      DecisionProblem q{parse_objective(common.objective), parse_mode(mode), threshold,
                        parse_policy_class(common.policy_class)};
      const auto answer = decide(inst, q, common.solve_options());
      const Instance work = prepare_for_class(inst, q.policy_class);
      doc["query"] = io::query_json(q);
      doc["answer"] = answer.answer;
      doc["witness"] = nullptr;
      if (answer.witness) {
        const auto w = verified(work, *answer.witness);
        const bool meets = objective_value(w, q.objective) >= q.threshold;
        if (meets != (q.mode == Mode::kPossible) ||
            !is_member(*answer.witness, q.policy_class, work.num_agents())) {
          throw VerificationError("decision witness " + format_policy(*answer.witness) +
                                  " does not support the answer");
        }
        doc["witness"] = format_policy(*answer.witness);
        doc["witness_welfare"] = io::welfare_json(w);
      }
      doc["method"] = to_string(answer.method);
      doc["padded_items"] = answer.padded_items;
      code = answer.answer ? kOk : kNo;
    } else if (*enumerate_cmd) {
      const Instance inst = load_instance_file(common.instance_file);
      const auto cls = parse_policy_class(common.policy_class);
      const Instance work = prepare_for_class(inst, cls);
      Json policies = Json::array();
      std::uint64_t listed = 0;
      oracle::for_each_policy(
          cls, work.num_agents(), work.num_items(),
          [&](std::span<const int> t) {
            if (limit && listed >= *limit) return false;
            policies.push_back(format_policy(Policy{{t.begin(), t.end()}}));
            ++listed;
            return true;
          },
          common.guard);
      doc["class"] = to_string(cls);
      doc["agents"] = work.num_agents();
      doc["items"] = work.num_items();
      doc["count"] = oracle::class_size(cls, work.num_agents(), work.num_items());
      doc["listed"] = listed;
      doc["policies"] = std::move(policies);
      doc["padded_items"] = work.num_items() - inst.num_items();
    } else if (*dist_cmd) {
      const Instance inst = load_instance_file(common.instance_file);
      const Instance work = pad_to_multiple(inst);
      oracle::Options opts;
      opts.guard = common.guard;
      const auto dist =
          oracle::ba_welfare_distribution(work, parse_objective(common.objective), opts);
      doc = io::distribution_json(dist);
      if (dist_threshold) {
        doc["threshold"] = *dist_threshold;
        doc["probability_at_least"] = dist.probability_at_least(*dist_threshold);
      }
      doc["padded_items"] = work.num_items() - inst.num_items();
    } else if (*sample_cmd) {
      const Instance inst = load_instance_file(common.instance_file);
      const Instance work = pad_to_multiple(inst);
      const auto obj = parse_objective(common.objective);
      const auto est = oracle::monte_carlo_ba(work, obj, threshold, samples, seed);
      doc["objective"] = to_string(obj);
      doc["threshold"] = threshold;
      doc["seed"] = seed;
      doc.update(io::estimate_json(est));
      doc["padded_items"] = work.num_items() - inst.num_items();
    } else if (*generate_cmd) {
      std::optional<reductions::GadgetInstance> g;
      if (*g3dm) {
        const auto x = io::parse_int_list(xs);
        g = reductions::gen_numerical_3dm(
            x, io::parse_int_list(ys), io::parse_int_list(zs), target,
            gadget_items < 0 ? 2 * static_cast<int>(x.size()) : gadget_items);
      } else if (*gpart) {
        g = reductions::gen_partition_rb(io::parse_int_list(as));
      } else if (*gequi) {
        g = reductions::gen_equipartition_balanced(io::parse_int_list(as));
      } else {
        std::vector<std::vector<int>> rankings;
        std::stringstream ss(rankings_text);
        std::string row;
        while (std::getline(ss, row, ';')) {
          std::vector<int> r;
          for (Utility v : io::parse_int_list(row)) r.push_back(static_cast<int>(v) - 1);
          rankings.push_back(std::move(r));
        }
        g = reductions::topk_welfare_transform(rankings, k,
                                               reductions::parse_topk_mode(topk_mode),
                                               parse_policy_class(common.policy_class));
      }
      doc = io::gadget_json(*g);
      if (!output_prefix.empty()) {
        write_file(output_prefix + ".json", io::instance_json(g->instance));
        write_file(output_prefix + ".gadget.json", doc);
        Json summary;
        summary["kind"] = doc["kind"];
        summary["instance_file"] = output_prefix + ".json";
        summary["gadget_file"] = output_prefix + ".gadget.json";
        summary["query"] = doc["query"];
        summary["certificate"] = doc["certificate"];
        doc = std::move(summary);
      }
    } else if (*verify_cmd) {
      const auto g = io::gadget_from_json(Json::parse(read_file(gadget_file)));
      std::string text = witness_text;
      if (std::filesystem::is_regular_file(witness_text)) text = read_file(witness_text);
      while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
      const bool accepted = reductions::verify_witness(g, io::parse_witness(text, g));
      doc["kind"] = to_string(g.kind);
      doc["accepted"] = accepted;
      code = accepted ? kOk : kNo;
    }
    out << doc.dump(2) << '\n';
    return code;
  } catch (const GuardExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kGuard;
  } catch (const NoExactAlgorithm& e) {
    err << "error: " << e.what() << '\n';
    return kGuard;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace seqalloc::cli
