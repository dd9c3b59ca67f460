#include "limitlab/learners.hpp"

#include <deque>
#include <set>
#include <stdexcept>

namespace limitlab {

BmsLearner::BmsLearner(std::string id, State start, StepFn step)
    : id_(std::move(id)), start_(std::move(start)), step_(std::make_shared<const StepFn>(std::move(step))) {}

IterLearner::IterLearner(std::string id, StepFn step)
    : id_(std::move(id)), step_(std::make_shared<const StepFn>(std::move(step))) {}

HistoryLearner::HistoryLearner(std::string id, Fn fn, std::optional<BmsLearner> factors_through)
    : id_(std::move(id)), fn_(std::make_shared<const Fn>(std::move(fn))), source_(std::move(factors_through)) {}

Partial<BmsRun> bms_run(const BmsLearner& m, const State& from, std::span<const Datum> seq) {
  BmsRun run{from, Hypothesis::none()};
  for (std::size_t i = 0; i < seq.size(); ++i) {
    auto tr = m.step(run.state, seq[i]);
    if (!tr) return Divergence{i};
    run.state = std::move(tr->next);
    run.hyp = std::move(tr->hyp);
  }
  return run;
}

Partial<BmsRun> bms_run(const BmsLearner& m, std::span<const Datum> seq) { return bms_run(m, m.start(), seq); }

Partial<Hypothesis> iter_run(const IterLearner& m, std::span<const Datum> seq) {
  Hypothesis h = Hypothesis::none();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    auto next = m.step(h, seq[i]);
    if (!next) return Divergence{i};
    h = std::move(*next);
  }
  return h;
}

// ---------------------------------------------------------------------------

namespace {

using RowKey = std::pair<Term, TableDatum>;

struct RowValue {
  Term next;
  Hypothesis hyp;
};

std::shared_ptr<const std::map<RowKey, RowValue>> index_rows(const TransitionTable& t) {
  auto out = std::make_shared<std::map<RowKey, RowValue>>();
  for (const auto& row : t.rows) {
    auto [it, fresh] = out->emplace(RowKey{row.from, row.datum}, RowValue{row.next, row.hyp});
    if (!fresh) {
      throw std::invalid_argument("learner '" + t.id + "': duplicate row for state " + row.from.to_string() +
                                  " and datum " +
                                  (row.datum.datum ? row.datum.datum->to_string() : std::string("*")));
    }
  }
  return out;
}

const RowValue* lookup(const std::map<RowKey, RowValue>& rows, const Term& from, const Datum& x) {
  if (auto it = rows.find(RowKey{from, TableDatum{x}}); it != rows.end()) return &it->second;
  if (auto it = rows.find(RowKey{from, TableDatum::wildcard()}); it != rows.end()) return &it->second;
  return nullptr;
}

nlohmann::json datum_json(const TableDatum& d) {
  if (!d.datum) return "*";
  if (d.datum->is_pause()) return "#";
  return d.datum->value();
}

TableDatum datum_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "*") return TableDatum::wildcard();
    return TableDatum{Datum::parse(s)};
  }
  if (j.is_number_unsigned() || j.is_number_integer()) return TableDatum{Datum::number(j.get<Nat>())};
  throw std::invalid_argument("bad datum in transition row: " + j.dump());
}

}  // namespace

BmsLearner TransitionTable::to_bms() const {
  if (iterative) throw std::logic_error("table '" + id + "' is iterative");
  auto rows_by_key = index_rows(*this);
  return BmsLearner(id, State(start), [rows_by_key](const State& s, const Datum& x) -> std::optional<Transition> {
    const auto* v = lookup(*rows_by_key, s.term, x);
    if (!v) return std::nullopt;
    return Transition{State(v->next), v->hyp};
  });
}

IterLearner TransitionTable::to_iter() const {
  if (!iterative) throw std::logic_error("table '" + id + "' is not iterative");
  auto rows_by_key = index_rows(*this);
  return IterLearner(id, [rows_by_key](const Hypothesis& h, const Datum& x) -> std::optional<Hypothesis> {
    const auto* v = lookup(*rows_by_key, h.term(), x);
    if (!v) return std::nullopt;
    return v->hyp;
  });
}

std::size_t TransitionTable::state_count() const {
  std::set<Term> states{start};
  for (const auto& r : rows) {
    states.insert(r.from);
    states.insert(iterative ? r.hyp.term() : r.next);
  }
  return states.size();
}

NatSet TransitionTable::data() const {
  NatSet out;
  for (const auto& r : rows) {
    if (r.datum.datum && r.datum.datum->is_number()) out.insert(r.datum.datum->value());
  }
  return out;
}

nlohmann::json TransitionTable::to_json() const {
  nlohmann::json j;
  j["id"] = id;
  j["kind"] = iterative ? "iterative" : "bms";
  if (!iterative) j["start"] = start.to_json();
  auto rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row;
    if (iterative) {
      row["state"] = Hypothesis::from_term(r.from).to_json();
    } else {
      row["state"] = r.from.to_json();
    }
    row["datum"] = datum_json(r.datum);
    if (!iterative) row["next"] = r.next.to_json();
    row["hyp"] = r.hyp.to_json();
    rows_json.push_back(std::move(row));
  }
  j["transitions"] = std::move(rows_json);
  if (!provenance.is_null()) j["provenance"] = provenance;
  return j;
}

TransitionTable TransitionTable::from_json(const nlohmann::json& j) {
  TransitionTable t;
  const nlohmann::json* rows = &j;
  if (j.is_object()) {
    t.id = j.value("id", std::string("anonymous"));
    const auto kind = j.value("kind", std::string("bms"));
    if (kind != "bms" && kind != "iterative") throw std::invalid_argument("unknown learner kind '" + kind + "'");
    t.iterative = kind == "iterative";
    if (j.contains("start")) t.start = Term::from_json(j.at("start"));
    if (j.contains("provenance")) t.provenance = j.at("provenance");
    rows = &j.at("transitions");
  }
  if (!rows->is_array()) throw std::invalid_argument("transitions must be a JSON array");
  for (std::size_t i = 0; i < rows->size(); ++i) {
    const auto& r = (*rows)[i];
    try {
      Row row;
      if (t.iterative) {
        row.from = Hypothesis::from_json(r.at("state")).term();
      } else {
        row.from = Term::from_json(r.at("state"));
        row.next = Term::from_json(r.at("next"));
      }
      row.datum = datum_from_json(r.at("datum"));
      row.hyp = Hypothesis::from_json(r.at("hyp"));
      t.rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      throw std::invalid_argument("transition " + std::to_string(i) + ": " + e.what());
    }
  }
  index_rows(t);  // duplicate check
  return t;
}

// ---------------------------------------------------------------------------

namespace {

FinSeq alphabet_with_pause(const NatSet& alphabet) {
  FinSeq out;
  for (auto x : alphabet) out.push_back(Datum::number(x));
  out.push_back(Datum::pause());
  return out;
}

}  // namespace

Materialized materialize(const BmsLearner& m, const NatSet& alphabet, std::size_t max_states) {
  Materialized out;
  out.table.id = m.id();
  out.table.start = m.start().term;
  const auto symbols = alphabet_with_pause(alphabet);
  std::set<State> seen{m.start()};
  std::deque<State> frontier{m.start()};
  while (!frontier.empty()) {
    const State s = frontier.front();
    frontier.pop_front();
    for (const auto& x : symbols) {
      auto tr = m.step(s, x);
      if (!tr) continue;
      if (!seen.contains(tr->next)) {
        if (seen.size() >= max_states) {
          out.truncated = true;
          continue;
        }
        seen.insert(tr->next);
        frontier.push_back(tr->next);
      }
      out.table.rows.push_back({s.term, TableDatum{x}, tr->next.term, tr->hyp});
    }
  }
  return out;
}

Materialized materialize(const IterLearner& m, const NatSet& alphabet, std::size_t max_states) {
  Materialized out;
  out.table.id = m.id();
  out.table.iterative = true;
  const auto symbols = alphabet_with_pause(alphabet);
  std::set<Hypothesis> seen{Hypothesis::none()};
  std::deque<Hypothesis> frontier{Hypothesis::none()};
  while (!frontier.empty()) {
    const Hypothesis h = frontier.front();
    frontier.pop_front();
    for (const auto& x : symbols) {
      auto next = m.step(h, x);
      if (!next) continue;
      if (!seen.contains(*next)) {
        if (seen.size() >= max_states) {
          out.truncated = true;
          continue;
        }
        seen.insert(*next);
        frontier.push_back(*next);
      }
      out.table.rows.push_back({h.term(), TableDatum{x}, Term(), *next});
    }
  }
  return out;
}

std::size_t reachable_state_count(const BmsLearner& m, const NatSet& alphabet, std::size_t cap) {
  const auto symbols = alphabet_with_pause(alphabet);
  std::set<State> seen{m.start()};
  std::deque<State> frontier{m.start()};
  while (!frontier.empty() && seen.size() < cap) {
    const State s = frontier.front();
    frontier.pop_front();
    for (const auto& x : symbols) {
      if (auto tr = m.step(s, x); tr && seen.insert(tr->next).second) frontier.push_back(tr->next);
    }
  }
  return std::min(seen.size(), cap);
}

}  // namespace limitlab
