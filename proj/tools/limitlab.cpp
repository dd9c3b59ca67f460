// limitlab: command-line front end for tracing, checking, transforming and
// oracle runs. Every command prints JSON unless --summary is given.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "limitlab/experiment.hpp"
#include "limitlab/oracle.hpp"

using namespace limitlab;

namespace {

struct Common {
  std::string catalog;
  bool summary = false;
};

EvalContext make_context(const Common& c) {
  return EvalContext(c.catalog.empty() ? default_catalog() : load_catalog(c.catalog));
}

NatSet parse_alphabet(const std::string& s) {
  NatSet out;
  for (const auto& d : parse_seq(s)) {
    if (d.is_pause()) throw ConfigError("alphabet lists numbers only; # is always included");
    out.insert(d.value());
  }
  return out;
}

std::string construction_name(const std::string& op) {
  if (op == "it2bms") return "iterative learner run as a BMS learner over hypothesis states";
  if (op == "bms2it") return "BMS learner simulated iteratively through a padded visit log";
  if (op == "statedec") return "state-decisive learner over visit-log states";
  if (op == "sconv") return "strongly conservative learner with guarded indices";
  if (op == "wb") return "witness-based learner over mind-change-log states";
  return op;
}

void print_trace_summary(const Trace& tr) {
  for (const auto& r : tr.records) {
    std::cout << r.time << '\t' << r.datum.to_string() << '\t';
    if (r.state_before) std::cout << r.state_before->to_string() << " -> " << r.state_after->to_string() << '\t';
    std::cout << r.hyp.to_string() << '\n';
  }
  if (tr.cycle) std::cout << "cycle from " << tr.cycle->start << ", period " << tr.cycle->period << '\n';
  if (tr.divergence) std::cout << "undefined at position " << *tr.divergence << '\n';
  if (tr.budget_exhausted()) std::cout << "budget exhausted\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"limitlab: memory-limited learners in the limit"};
  app.fallthrough();
  app.require_subcommand(1);
  Common common;
  app.add_option("--catalog", common.catalog, "Catalog JSON (built-in catalog when omitted)");
  app.add_flag("--summary", common.summary, "Human-readable output instead of JSON");

  std::string config;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("--config", config, "Experiment config JSON")->required();

  std::string learner, text = "#", pred, op, out, alphabet, path_mode = "exclusive";
  std::size_t budget = 256, max_len = 4, max_states = 256;

  auto* tr_cmd = app.add_subcommand("trace", "Trace a learner on a text");
  tr_cmd->add_option("--learner", learner, "Learner JSON file or builtin:NAME")->required();
  tr_cmd->add_option("--text", text, "Text literal head|tail, e.g. 4,2|#")->required();
  tr_cmd->add_option("--budget", budget, "Maximum number of steps");

  auto* check_cmd = app.add_subcommand("check", "Check one predicate on a trace");
  check_cmd->add_option("--pred", pred, "Predicate tag, e.g. SNU")->required();
  check_cmd->add_option("--learner", learner, "Learner JSON file or builtin:NAME")->required();
  check_cmd->add_option("--text", text, "Text literal head|tail")->required();
  check_cmd->add_option("--budget", budget, "Maximum number of steps");

  auto* tf_cmd = app.add_subcommand("transform", "Derive a learner and write it as a table");
  tf_cmd->add_option("--op", op, "it2bms|bms2it|statedec|sconv|wb")
      ->required()
      ->check(CLI::IsMember({"it2bms", "bms2it", "statedec", "sconv", "wb"}));
  tf_cmd->add_option("--learner", learner, "Learner JSON file or builtin:NAME")->required();
  tf_cmd->add_option("--out", out, "Output file (stdout when omitted)");
  tf_cmd->add_option("--alphabet", alphabet, "Data to explore, e.g. 1,2 (default: the source table's data)");
  tf_cmd->add_option("--max-states", max_states, "Stop exploring after this many states");
  tf_cmd->add_option("--path-mode", path_mode, "exclusive|inclusive")
      ->check(CLI::IsMember({"exclusive", "inclusive"}));

  auto* or_cmd = app.add_subcommand("oracle", "Exhaustive small-instance verdict table");
  or_cmd->add_option("--learner", learner, "Learner JSON file or builtin:NAME")->required();
  or_cmd->add_option("--alphabet", alphabet, "Data, e.g. 1,2")->required();
  or_cmd->add_option("--max-len", max_len, "Longest sequence");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto cfg = ExperimentConfig::from_file(config);
      apply_seed_override(cfg);
      const auto report = run_experiment(cfg);
      std::cout << (common.summary ? summary_table(report.json) : report.json.dump(2) + "\n");
      return report.exit_code;
    }

    auto ctx = make_context(common);
    const auto m = load_learner(learner);
    register_learner(ctx, m);

    if (*tr_cmd) {
      const auto tr = trace(m, Text::parse(text), budget);
      if (common.summary) {
        print_trace_summary(tr);
      } else {
        std::cout << tr.to_json().dump(2) << '\n';
      }
      return 0;
    }

    if (*check_cmd) {
      const auto p = parse_predicate(pred);
      const auto tr = trace(m, Text::parse(text), budget);
      SemanticsCache sem(ctx);
      Verdict v;
      if (p == Predicate::BMS_STAR) {
        v = check_bms_star(tr);
      } else {
        v = check(p, tr, sem);
      }
      if (common.summary) {
        std::cout << to_string(p) << ' ' << to_string(v.outcome);
        if (v.witness) std::cout << " (" << v.witness->r << ',' << v.witness->s << ',' << v.witness->t << ')';
        if (!v.note.empty()) std::cout << ": " << v.note;
        std::cout << '\n';
      } else {
        std::cout << verdict_report(v, tr, sem).dump(2) << '\n';
      }
      return v.outcome == Outcome::violated ? 1 : 0;
    }

    if (*tf_cmd) {
      const auto mode = path_mode == "inclusive" ? PathMode::inclusive : PathMode::exclusive;
      const auto derived = apply_transform(m, op, mode);
      const NatSet data = alphabet.empty() ? m.data : parse_alphabet(alphabet);
      auto mat = derived.is_bms() ? materialize(derived.bms(), data, max_states)
                                  : materialize(derived.iterative(), data, max_states);
      mat.table.provenance = {{"construction", construction_name(op)},
                              {"op", op},
                              {"source", m.id()},
                              {"alphabet", std::vector<Nat>(data.begin(), data.end())},
                              {"truncated", mat.truncated}};
      const auto dumped = mat.table.to_json().dump(2) + "\n";
      if (out.empty()) {
        std::cout << dumped;
      } else {
        std::ofstream f(out);
        if (!f) throw ConfigError(out + ": cannot write");
        f << dumped;
      }
      return 0;
    }

    if (*or_cmd) {
      if (!m.is_bms()) throw ConfigError("the oracle runs BMS learners; apply it2bms first");
      const auto table = brute_force_oracle(m.bms(), parse_alphabet(alphabet), max_len, ctx);
      if (common.summary) {
        std::cout << table.sequences << " sequences, " << table.reachable_states << " reachable states\n";
        for (const auto& v : table.verdicts) {
          std::cout << Text(v.head, {Datum::pause()}).to_string();
          for (const auto& [p, o] : v.outcomes) std::cout << ' ' << to_string(p) << '=' << to_string(o);
          std::cout << '\n';
        }
      } else {
        std::cout << table.to_json().dump(2) << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "limitlab: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
