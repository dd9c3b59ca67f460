#include "limitlab/trace.hpp"

#include <map>

namespace limitlab {

std::string to_string(LearnerKind k) {
  switch (k) {
    case LearnerKind::bms:
      return "bms";
    case LearnerKind::iterative:
      return "iterative";
    case LearnerKind::history:
      return "history";
  }
  return "?";
}

const TraceRecord& Trace::at(std::size_t t) const {
  if (t < records.size()) return records[t];
  if (cycle) return records[cycle->start + (t - cycle->start) % cycle->period];
  throw std::out_of_range("trace time " + std::to_string(t) + " is not determined");
}

bool Trace::defined_at(std::size_t t) const {
  if (divergence) return t < records.size();
  return t < records.size() || cycle.has_value();
}

nlohmann::json Trace::to_json() const {
  nlohmann::json j;
  j["learner"] = learner_id;
  j["kind"] = to_string(kind);
  j["text"] = text.to_string();
  j["budget"] = budget;
  auto recs = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json rec{{"time", r.time}, {"datum", r.datum.to_string()}, {"hyp", r.hyp.to_json()}};
    if (r.state_before) rec["state_before"] = r.state_before->term.to_json();
    if (r.state_after) rec["state_after"] = r.state_after->term.to_json();
    recs.push_back(std::move(rec));
  }
  j["records"] = std::move(recs);
  if (cycle) {
    j["outcome"] = "cycle";
    j["cycle"] = {{"start", cycle->start}, {"period", cycle->period}};
  } else if (divergence) {
    j["outcome"] = "diverged";
    j["divergence"] = *divergence;
  } else {
    j["outcome"] = "budget_exhausted";
  }
  if (kind == LearnerKind::bms) {
    const auto v = visited_states(*this);
    auto states = nlohmann::json::array();
    for (const auto& s : v.states) states.push_back(s.term.to_json());
    j["visited_states"] = std::move(states);
    j["state_verdict"] = v.verdict == StateVerdict::finite ? "FINITE" : "UNDETERMINED";
  }
  return j;
}

namespace {

void check_budget(const Text& text, std::size_t budget) {
  if (budget < text.head.size() + 1) {
    throw std::invalid_argument("budget " + std::to_string(budget) + " must be at least |head|+1 = " +
                                std::to_string(text.head.size() + 1));
  }
}

/// Shared driver: `Memory` is what determines future behaviour (state or
/// previous hypothesis); `step` maps (memory, datum) to the next record.
template <class Memory, class StepFn>
void run_with_cycle_detection(Trace& tr, Memory memory, std::size_t budget, StepFn step) {
  const auto& text = tr.text;
  std::map<std::pair<Memory, std::size_t>, std::size_t> seen;
  for (std::size_t t = 0; t < budget; ++t) {
    if (t >= text.head.size()) {
      const auto offset = (t - text.head.size()) % text.tail.size();
      auto [it, fresh] = seen.emplace(std::pair{memory, offset}, t);
      if (!fresh) {
        tr.cycle = Cycle{it->second, t - it->second};
        return;
      }
    }
    if (!step(memory, t)) return;
  }
}

}  // namespace

Trace trace(const BmsLearner& m, const Text& text, std::size_t budget) {
  check_budget(text, budget);
  Trace tr;
  tr.kind = LearnerKind::bms;
  tr.learner_id = m.id();
  tr.text = text;
  tr.budget = budget;
  run_with_cycle_detection(tr, m.start(), budget, [&](State& s, std::size_t t) {
    const auto x = text.at(t);
    auto step = m.step(s, x);
    if (!step) {
      tr.divergence = t;
      tr.divergence_state = s;
      return false;
    }
    tr.records.push_back({t, x, s, step->next, step->hyp});
    s = step->next;
    return true;
  });
  return tr;
}

Trace trace(const IterLearner& m, const Text& text, std::size_t budget) {
  check_budget(text, budget);
  Trace tr;
  tr.kind = LearnerKind::iterative;
  tr.learner_id = m.id();
  tr.text = text;
  tr.budget = budget;
  run_with_cycle_detection(tr, Hypothesis::none(), budget, [&](Hypothesis& h, std::size_t t) {
    const auto x = text.at(t);
    auto next = m.step(h, x);
    if (!next) {
      tr.divergence = t;
      return false;
    }
    tr.records.push_back({t, x, std::nullopt, std::nullopt, *next});
    h = *next;
    return true;
  });
  return tr;
}

Trace trace(const HistoryLearner& m, const Text& text, std::size_t budget) {
  check_budget(text, budget);
  Trace tr;
  tr.kind = LearnerKind::history;
  tr.learner_id = m.id();
  tr.text = text;
  tr.budget = budget;
  FinSeq prefix;
  for (std::size_t t = 0; t < budget; ++t) {
    prefix.push_back(text.at(t));
    auto h = m(prefix);
    if (!h) {
      tr.divergence = t;
      break;
    }
    tr.records.push_back({t, prefix.back(), std::nullopt, std::nullopt, *h});
  }
  return tr;
}

VisitedStates visited_states(const Trace& tr) {
  if (tr.kind != LearnerKind::bms) throw TraceKindError("visited_states needs a BMS trace");
  VisitedStates out;
  for (const auto& r : tr.records) out.states.insert(*r.state_before);
  if (tr.divergence_state) out.states.insert(*tr.divergence_state);
  out.verdict = tr.complete() ? StateVerdict::finite : StateVerdict::undetermined;
  return out;
}

}  // namespace limitlab
