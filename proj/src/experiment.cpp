#include "limitlab/experiment.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace limitlab {

const std::string& AnyLearner::id() const {
  return std::visit([](const auto& m) -> const std::string& { return m.id(); }, learner);
}

const BmsLearner& AnyLearner::bms() const {
  if (!is_bms()) throw ConfigError("learner " + id() + " is iterative, a BMS learner is needed");
  return std::get<BmsLearner>(learner);
}

const IterLearner& AnyLearner::iterative() const {
  if (is_bms()) throw ConfigError("learner " + id() + " is a BMS learner, an iterative one is needed");
  return std::get<IterLearner>(learner);
}

namespace {

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

AnyLearner load_learner(const std::string& ref, const std::filesystem::path& base) {
  constexpr std::string_view prefix = "builtin:";
  if (ref.starts_with(prefix)) {
    try {
      const auto name = ref.substr(prefix.size());
      NatSet data;
      if (name != "B" && name != "counter") data = fixture(name).data();
      return {fixture_learner(name), std::nullopt, {}, data};
    } catch (const std::invalid_argument& e) {
      throw ConfigError(ref + ": " + e.what());
    }
  }
  const auto path = resolve(ref, base);
  const auto j = read_json_file(path);
  try {
    const auto table = TransitionTable::from_json(j);
    if (table.iterative) return {table.to_iter(), std::nullopt, {}, table.data()};
    return {table.to_bms(), std::nullopt, {}, table.data()};
  } catch (const std::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

AnyLearner apply_transform(const AnyLearner& m, const std::string& op, PathMode mode) {
  AnyLearner out{m.learner, std::nullopt, m.dependencies, m.data};
  if (op == "it2bms") {
    out.learner = it_to_bms(m.iterative());
  } else if (op == "bms2it") {
    out.learner = bms_to_it(m.bms(), mode);
  } else if (op == "statedec") {
    out.learner = state_decisive(m.bms(), mode);
  } else if (op == "sconv") {
    out.learner = strongly_conservative_bms(m.bms());
    out.sconv_source = m.bms();
    out.dependencies.push_back(m.bms());
  } else if (op == "wb") {
    const BmsLearner& source = m.sconv_source ? *m.sconv_source : m.bms();
    out.learner = witness_based(source);
    out.dependencies.push_back(source);
  } else {
    throw ConfigError("unknown transform '" + op + "' (it2bms, bms2it, statedec, sconv, wb)");
  }
  return out;
}

void register_learner(EvalContext& ctx, const AnyLearner& m) {
  for (const auto& d : m.dependencies) ctx.register_learner(d);
  if (m.is_bms()) ctx.register_learner(m.bms());
}

Trace trace(const AnyLearner& m, const Text& text, std::size_t budget) {
  return std::visit([&](const auto& l) { return trace(l, text, budget); }, m.learner);
}

Catalog load_catalog(const std::filesystem::path& path) {
  const auto j = read_json_file(path);
  try {
    return Catalog::from_json(j);
  } catch (const std::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

namespace {

std::vector<Predicate> parse_predicates(const nlohmann::json& j) {
  std::vector<Predicate> out;
  for (const auto& p : j) out.push_back(parse_predicate(p.get<std::string>()));
  return out;
}

std::vector<std::string> split_pipeline(const std::string& s) {
  std::vector<std::string> ops;
  std::stringstream in(s);
  for (std::string op; std::getline(in, op, '+');) {
    if (!op.empty()) ops.push_back(op);
  }
  return ops;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j, const std::filesystem::path& base) {
  ExperimentConfig cfg;
  try {
    if (j.contains("catalog")) cfg.catalog = resolve(j.at("catalog").get<std::string>(), base);
    for (const auto& l : j.at("learners")) {
      const auto ref = l.get<std::string>();
      cfg.learners.push_back(ref.starts_with("builtin:") ? ref : resolve(ref, base).string());
    }
    if (cfg.learners.empty()) throw ConfigError("config lists no learners");
    if (j.contains("transforms")) {
      cfg.transforms.clear();
      for (const auto& t : j.at("transforms")) {
        cfg.transforms.push_back(t.is_string() ? split_pipeline(t.get<std::string>())
                                               : t.get<std::vector<std::string>>());
      }
    }
    if (j.contains("texts")) {
      for (const auto& t : j.at("texts")) cfg.texts.push_back(Text::parse(t.get<std::string>()));
    }
    const Catalog catalog = cfg.catalog ? load_catalog(*cfg.catalog) : default_catalog();
    if (j.contains("languages")) {
      for (const auto& l : j.at("languages")) {
        if (l.is_string()) {
          const auto id = l.get<std::string>();
          const auto it = catalog.entries.find(id);
          if (it == catalog.entries.end()) throw ConfigError("language '" + id + "' is not in the catalog");
          cfg.languages.push_back({id, it->second.elements});
        } else {
          const auto xs = l.get<std::vector<Nat>>();
          NatSet set(xs.begin(), xs.end());
          cfg.languages.push_back({format_set(set), set});
        }
      }
    }
    if (j.contains("generation")) {
      const auto& g = j.at("generation");
      cfg.generation.count = g.value("count", cfg.generation.count);
      cfg.generation.max_head = g.value("max_head", cfg.generation.max_head);
      cfg.generation.max_tail = g.value("max_tail", cfg.generation.max_tail);
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.budget = j.value("budget", cfg.budget);
    if (cfg.budget < 1) throw ConfigError("budget must be at least 1");
    if (j.contains("predicates")) cfg.predicates = parse_predicates(j.at("predicates"));
    if (j.contains("assert_holds")) cfg.asserted = parse_predicates(j.at("assert_holds"));
    cfg.undetermined_fails = j.value("undetermined_fails", false);
    cfg.audit = j.value("audit", true);
    const auto mode = j.value("path_mode", std::string("exclusive"));
    if (mode != "exclusive" && mode != "inclusive") throw ConfigError("path_mode must be exclusive or inclusive");
    cfg.path_mode = mode == "inclusive" ? PathMode::inclusive : PathMode::exclusive;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (auto p : cfg.asserted) {
    if (std::find(cfg.predicates.begin(), cfg.predicates.end(), p) == cfg.predicates.end()) {
      cfg.predicates.push_back(p);
    }
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  const auto j = read_json_file(path);
  try {
    return from_json(j, path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void apply_seed_override(ExperimentConfig& cfg) {
  const char* env = std::getenv("LIMITLAB_SEED");
  if (!env) return;
  try {
    std::size_t used = 0;
    const auto seed = std::stoull(env, &used);
    if (used != std::string_view(env).size()) throw std::invalid_argument("trailing characters");
    cfg.seed = seed;
  } catch (const std::exception&) {
    throw ConfigError(std::string("LIMITLAB_SEED is not a number: '") + env + "'");
  }
}

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

nlohmann::json verdict_json(const Verdict& v) {
  nlohmann::json j{{"outcome", to_string(v.outcome)}};
  if (v.witness) j["witness"] = {v.witness->r, v.witness->s, v.witness->t};
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  EvalContext ctx(cfg.catalog ? load_catalog(*cfg.catalog) : default_catalog());

  std::vector<AnyLearner> learners;
  for (const auto& ref : cfg.learners) {
    const auto base = load_learner(ref);
    for (const auto& pipeline : cfg.transforms) {
      AnyLearner m = base;
      for (const auto& op : pipeline) m = apply_transform(m, op, cfg.path_mode);
      register_learner(ctx, m);
      learners.push_back(std::move(m));
    }
  }

  std::vector<Text> texts = cfg.texts;
  for (std::size_t i = 0; i < cfg.languages.size(); ++i) {
    auto more = gen_texts(cfg.languages[i].elements, cfg.generation, cfg.seed + i, ctx.universe_max());
    texts.insert(texts.end(), more.begin(), more.end());
  }

  SemanticsCache sem(ctx);
  std::vector<Trace> traces;
  auto pairs = nlohmann::json::array();
  nlohmann::json summary = nlohmann::json::object();
  auto failures = nlohmann::json::array();
  for (const auto& p : cfg.predicates) summary[to_string(p)] = {{"HOLDS", 0}, {"VIOLATED", 0}, {"UNDETERMINED", 0}};

  for (const auto& m : learners) {
    for (const auto& text : texts) {
      Trace tr = trace(m, text, std::max(cfg.budget, text.head.size() + 1));
      nlohmann::json pair{{"learner", m.id()}, {"text", text.to_string()}, {"records", tr.records.size()}};
      if (tr.cycle) {
        pair["outcome"] = "cycle";
        pair["cycle"] = {{"start", tr.cycle->start}, {"period", tr.cycle->period}};
      } else if (tr.divergence) {
        pair["outcome"] = "diverged";
        pair["divergence"] = *tr.divergence;
      } else {
        pair["outcome"] = "budget_exhausted";
      }
      nlohmann::json verdicts = nlohmann::json::object();
      for (const auto& p : cfg.predicates) {
        Verdict v;
        if (p == Predicate::BMS_STAR) {
          v = m.is_bms() ? check_bms_star(tr) : Verdict{p, Outcome::undetermined, std::nullopt, "not a BMS trace"};
        } else {
          v = check(p, tr, sem);
        }
        const auto tag = to_string(p);
        summary[tag][to_string(v.outcome)] = summary[tag][to_string(v.outcome)].get<int>() + 1;
        verdicts[tag] = verdict_json(v);
        const bool asserted = std::find(cfg.asserted.begin(), cfg.asserted.end(), p) != cfg.asserted.end();
        if (asserted && (v.outcome == Outcome::violated ||
                         (cfg.undetermined_fails && v.outcome == Outcome::undetermined))) {
          auto f = verdict_json(v);
          f["learner"] = m.id();
          f["text"] = text.to_string();
          f["predicate"] = tag;
          failures.push_back(std::move(f));
        }
      }
      pair["verdicts"] = std::move(verdicts);
      pairs.push_back(std::move(pair));
      traces.push_back(std::move(tr));
    }
  }

  ExperimentReport report;
  report.exit_code = failures.empty() ? 0 : 1;
  auto& j = report.json;
  j["timestamp"] = utc_timestamp();
  j["seed"] = cfg.seed;
  j["budget"] = cfg.budget;
  j["learners"] = nlohmann::json::array();
  for (const auto& m : learners) j["learners"].push_back(m.id());
  j["texts"] = texts.size();
  j["pairs"] = std::move(pairs);
  j["summary"] = std::move(summary);
  j["asserted_failures"] = std::move(failures);
  if (cfg.audit) j["audit"] = implication_audit(traces, ctx).to_json();
  j["exit_code"] = report.exit_code;
  return report;
}

std::string summary_table(const nlohmann::json& report) {
  std::ostringstream out;
  for (const auto& pair : report.at("pairs")) {
    out << std::left << std::setw(24) << pair.at("learner").get<std::string>() << ' ' << std::setw(28)
        << pair.at("text").get<std::string>() << ' ' << std::setw(16) << pair.at("outcome").get<std::string>();
    for (const auto& [tag, v] : pair.at("verdicts").items()) {
      out << ' ' << tag << '=' << v.at("outcome").get<std::string>();
      if (v.contains("witness")) out << v.at("witness").dump();
    }
    out << '\n';
  }
  out << "summary:";
  for (const auto& [tag, counts] : report.at("summary").items()) {
    out << "\n  " << std::setw(9) << tag << " HOLDS " << counts.at("HOLDS") << "  VIOLATED " << counts.at("VIOLATED")
        << "  UNDETERMINED " << counts.at("UNDETERMINED");
  }
  if (report.contains("audit")) out << "\naudit: " << report.at("audit").dump();
  out << "\nexit code " << report.at("exit_code") << '\n';
  return out.str();
}

}  // namespace limitlab
