#include "limitlab/transforms.hpp"

#include <algorithm>
#include <deque>

namespace limitlab {

// ---------------------------------------------------------------------------
// Visit logs

VisitLog::VisitLog(State start) { entries_.push_back({std::move(start), Datum::pause()}); }

bool VisitLog::contains(const State& s) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const VisitEntry& e) { return e.state == s; });
}

VisitLog VisitLog::extended(State s, Datum x) const {
  if (contains(s)) throw std::invalid_argument("state " + s.to_string() + " is already logged");
  VisitLog v = *this;
  v.entries_.push_back({std::move(s), x});
  return v;
}

Term VisitLog::to_term() const {
  Term::List items;
  items.reserve(entries_.size());
  for (const auto& e : entries_) items.push_back(Term::list({e.state.term, e.datum.to_term()}));
  return Term::list(std::move(items));
}

VisitLog VisitLog::from_term(const Term& t) {
  if (!t.is_list() || t.as_list().empty()) throw std::invalid_argument("not a visit log: " + t.to_string());
  VisitLog v;
  for (const auto& item : t.as_list()) {
    if (!item.is_list() || item.as_list().size() != 2) {
      throw std::invalid_argument("not a visit log entry: " + item.to_string());
    }
    State s(item.as_list()[0]);
    if (v.contains(s)) throw std::invalid_argument("visit log repeats state " + s.to_string());
    v.entries_.push_back({std::move(s), Datum::from_term(item.as_list()[1])});
  }
  return v;
}

bool VisitLog::consistent_with(const BmsLearner& m) const {
  if (entries_.front().state != m.start()) return false;
  for (std::size_t k = 1; k < entries_.size(); ++k) {
    auto step = m.step(entries_[k - 1].state, entries_[k].datum);
    if (!step || step->next != entries_[k].state) return false;
  }
  return true;
}

FinSeq path_replay(const VisitLog& v, const State& from, PathMode mode) {
  const auto& es = v.entries();
  auto it = std::find_if(es.begin(), es.end(), [&](const VisitEntry& e) { return e.state == from; });
  if (it == es.end()) throw MissingState("state " + from.to_string() + " is not in the visit log");
  if (mode == PathMode::exclusive) ++it;
  FinSeq path;
  for (; it != es.end(); ++it) path.push_back(it->datum);
  return path;
}

Partial<PumpStep> pump_step(const BmsLearner& m, const VisitLog& v, const Datum& x, PathMode mode) {
  auto step = m.step(v.last_state(), x);
  if (!step) return Divergence{0};
  if (!v.contains(step->next)) return PumpStep{{x}, v.extended(step->next, x)};
  FinSeq pump{x};
  const auto path = path_replay(v, step->next, mode);
  pump.insert(pump.end(), path.begin(), path.end());
  return PumpStep{std::move(pump), v};
}

// ---------------------------------------------------------------------------
// Iterative <-> BMS

State hypothesis_state(const Hypothesis& h) {
  if (h == Hypothesis::none()) return State::of(0);
  return State(Term::list({Term::sym("h"), h.term()}));
}

Hypothesis state_hypothesis(const State& s) {
  if (s.term.is_nat() && s.term.as_nat() == 0) return Hypothesis::none();
  const auto& t = s.term;
  if (t.is_list() && t.as_list().size() == 2 && t.as_list()[0].is_sym("h")) {
    return Hypothesis::from_term(t.as_list()[1]);
  }
  throw std::invalid_argument("not a hypothesis state: " + s.to_string());
}

BmsLearner it_to_bms(const IterLearner& m) {
  return BmsLearner("it2bms(" + m.id() + ")", State::of(0),
                    [m](const State& s, const Datum& x) -> std::optional<Transition> {
                      Hypothesis prev;
                      try {
                        prev = state_hypothesis(s);
                      } catch (const std::invalid_argument&) {
                        return std::nullopt;
                      }
                      auto h = m.step(prev, x);
                      if (!h) return std::nullopt;
                      return Transition{hypothesis_state(*h), *h};
                    });
}

std::optional<VisitLog> decode_visit(const Hypothesis& h, const State& start) {
  if (h == Hypothesis::none()) return VisitLog(start);
  std::optional<Term> payload;
  if (h.is_none()) {
    payload = h.none_payload();
  } else if (h.index().kind() == IndexExpr::Kind::padded) {
    payload = h.index().payload();
  }
  if (!payload) return std::nullopt;
  try {
    return VisitLog::from_term(*payload);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

IterLearner bms_to_it(const BmsLearner& m, PathMode mode) {
  return IterLearner("bms2it(" + m.id() + ")", [m, mode](const Hypothesis& prev, const Datum& x)
                                                   -> std::optional<Hypothesis> {
    const auto visit = decode_visit(prev, m.start());
    if (!visit) return std::nullopt;
    auto p = pump_step(m, *visit, x, mode);
    if (diverged(p)) return std::nullopt;
    const auto& ps = std::get<PumpStep>(p);
    auto run = bms_run(m, visit->last_state(), ps.pump);
    if (diverged(run)) return std::nullopt;
    return pad(std::get<BmsRun>(run).hyp, ps.visit.to_term());
  });
}

EquivalentText equivalent_text(const BmsLearner& m, const Text& text, std::size_t horizon, PathMode mode) {
  if (horizon == 0) throw std::invalid_argument("equivalent_text needs a positive horizon");
  EquivalentText out;
  out.sim.push_back(0);
  VisitLog visit(m.start());
  for (std::size_t t = 0; t < horizon; ++t) {
    auto p = pump_step(m, visit, text.at(t), mode);
    if (diverged(p)) {
      out.divergence = Divergence{t};
      break;
    }
    auto& ps = std::get<PumpStep>(p);
    out.prefix.insert(out.prefix.end(), ps.pump.begin(), ps.pump.end());
    out.sim.push_back(out.prefix.size());
    visit = std::move(ps.visit);
  }
  return out;
}

std::optional<Text> equivalent_text_periodic(const BmsLearner& m, const Text& text, std::size_t max_passes,
                                             PathMode mode) {
  VisitLog visit(m.start());
  FinSeq head;
  auto feed = [&](const Datum& x, FinSeq& into) {
    auto p = pump_step(m, visit, x, mode);
    if (diverged(p)) return false;
    auto& ps = std::get<PumpStep>(p);
    into.insert(into.end(), ps.pump.begin(), ps.pump.end());
    visit = std::move(ps.visit);
    return true;
  };
  for (const auto& x : text.head) {
    if (!feed(x, head)) return std::nullopt;
  }
  for (std::size_t pass = 0; pass < max_passes; ++pass) {
    const auto before = visit.entries().size();
    FinSeq period;
    for (const auto& x : text.tail) {
      if (!feed(x, period)) return std::nullopt;
    }
    // Same log at both ends of the pass: every later pass pumps identically.
    if (visit.entries().size() == before) return Text(std::move(head), std::move(period));
    head.insert(head.end(), period.begin(), period.end());
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// State decisiveness

namespace {

State composite(const State& s, const Term& log) { return State(Term::list({s.term, log})); }

/// Splits a two-component composite state; nullopt for foreign states.
std::optional<std::pair<State, Term>> split(const State& c) {
  if (!c.term.is_list() || c.term.as_list().size() != 2) return std::nullopt;
  return std::pair{State(c.term.as_list()[0]), c.term.as_list()[1]};
}

}  // namespace

BmsLearner state_decisive(const BmsLearner& m, PathMode mode) {
  const State start = composite(m.start(), VisitLog(m.start()).to_term());
  return BmsLearner(
      "statedec(" + m.id() + ")", start, [m, mode](const State& c, const Datum& x) -> std::optional<Transition> {
        const auto parts = split(c);
        if (!parts) return std::nullopt;
        const auto& [s, log] = *parts;
        VisitLog visit = VisitLog::from_term(log);
        auto step = m.step(s, x);
        if (!step) return std::nullopt;
        if (!visit.contains(step->next)) {
          auto grown = visit.extended(step->next, x);
          return Transition{composite(step->next, grown.to_term()), step->hyp};
        }
        FinSeq pump{x};
        const auto path = path_replay(visit, step->next, mode);
        pump.insert(pump.end(), path.begin(), path.end());
        auto run = bms_run(m, s, pump);
        if (diverged(run)) return std::nullopt;
        return Transition{c, std::get<BmsRun>(run).hyp};
      });
}

std::size_t withdrawn_state_reentries(const Trace& tr) {
  if (tr.kind != LearnerKind::bms) throw TraceKindError("withdrawn_state_reentries needs a BMS trace");
  std::size_t end = tr.records.size();
  if (tr.cycle) end += tr.cycle->period;
  std::set<State> left;
  std::size_t count = 0;
  for (std::size_t t = 0; t < end; ++t) {
    const auto& r = tr.at(t);
    if (*r.state_after == *r.state_before) continue;
    left.insert(*r.state_before);
    if (left.contains(*r.state_after)) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Strongly conservative and witness-based learners

namespace {

Hypothesis guard_of(const std::string& id, const Hypothesis& h, const State& s) {
  if (h.is_none()) return Hypothesis::none();
  return IndexExpr::guarded(id, h.index(), s);
}

}  // namespace

HistoryLearner strongly_conservative(const BmsLearner& m) {
  return HistoryLearner(
      "sconv(" + m.id() + ")",
      [m](std::span<const Datum> seq) -> std::optional<Hypothesis> {
        if (seq.empty()) return Hypothesis::none();
        auto run = bms_run(m, seq);
        if (diverged(run)) return std::nullopt;
        const auto& r = std::get<BmsRun>(run);
        return guard_of(m.id(), r.hyp, r.state);
      },
      m);
}

BmsLearner strongly_conservative_bms(const BmsLearner& m) {
  return BmsLearner("sconv(" + m.id() + ")", m.start(),
                    [m](const State& s, const Datum& x) -> std::optional<Transition> {
                      auto step = m.step(s, x);
                      if (!step) return std::nullopt;
                      return Transition{step->next, guard_of(m.id(), step->hyp, step->next)};
                    });
}

std::vector<ConservativenessViolation> audit_local_conservativeness(const HistoryLearner& m,
                                                                    std::span<const Text> texts,
                                                                    std::size_t horizon, const EvalContext& ctx) {
  SemanticsCache sem(ctx);
  std::vector<ConservativenessViolation> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const FinSeq seq = expand(texts[i], horizon);
    auto prev = m(std::span<const Datum>(seq.data(), 0));
    for (std::size_t n = 0; n < horizon && prev; ++n) {
      auto next = m(std::span<const Datum>(seq.data(), n + 1));
      if (!next) break;
      const auto& x = seq[n];
      if (*next != *prev && !prev->is_none() && x.is_number() && sem(prev->index()).contains(x.value())) {
        out.push_back({i, n});
      }
      prev = std::move(next);
    }
  }
  return out;
}

BmsLearner witness_based(const BmsLearner& m) {
  const BmsLearner inner = strongly_conservative_bms(m);
  const State start = composite(m.start(), Term::list({}));
  return BmsLearner(
      "wb(" + m.id() + ")", start, [inner](const State& c, const Datum& x) -> std::optional<Transition> {
        const auto parts = split(c);
        if (!parts || !parts->second.is_list()) return std::nullopt;
        const auto& [s, log] = *parts;
        const auto& entries = log.as_list();

        Datum fed = x;
        for (const auto& e : entries) {
          if (x.is_number() && Datum::from_term(e.as_list()[1]) == x) fed = Datum::pause();
        }
        auto step = inner.step(s, fed);
        if (!step) return std::nullopt;

        const Hypothesis last =
            entries.empty() ? Hypothesis::none() : Hypothesis::from_term(entries.back().as_list()[0]);
        if (step->hyp == last) return Transition{composite(step->next, log), Hypothesis::none()};

        Term::List grown = entries;
        grown.push_back(Term::list({step->hyp.term(), fed.to_term()}));
        Hypothesis out;
        if (!step->hyp.is_none()) {
          NatSet witnesses;
          for (const auto& e : grown) {
            const auto d = Datum::from_term(e.as_list()[1]);
            if (d.is_number()) witnesses.insert(d.value());
          }
          out = IndexExpr::union_of(witnesses, step->hyp.index());
        }
        return Transition{composite(step->next, Term::list(std::move(grown))), out};
      });
}

BmsLearner witness_based(const HistoryLearner& m_prime) {
  if (!m_prime.factors_through()) {
    throw std::invalid_argument("learner " + m_prime.id() + " records no BMS factorisation");
  }
  return witness_based(*m_prime.factors_through());
}

// ---------------------------------------------------------------------------
// Locking sequences

namespace {

/// All runs from (s, h) over sequences of length <= depth keep conjecture h
/// (a `?` counts as keeping it).
bool stays_locked(const BmsLearner& m, const State& s, const Hypothesis& h, const std::vector<Datum>& symbols,
                  std::size_t depth) {
  if (depth == 0) return true;
  for (const auto& x : symbols) {
    auto step = m.step(s, x);
    if (!step) return false;
    if (!step->hyp.is_none() && step->hyp != h) return false;
    if (!stays_locked(m, step->next, h, symbols, depth - 1)) return false;
  }
  return true;
}

}  // namespace

std::optional<FinSeq> find_locking_sequence(const BmsLearner& m, const NatSet& language, std::size_t max_len,
                                            std::size_t ext_len, const EvalContext& ctx) {
  SemanticsCache sem(ctx);
  std::vector<Datum> symbols;
  for (Nat x : language) symbols.push_back(Datum::number(x));
  symbols.push_back(Datum::pause());

  struct Node {
    FinSeq seq;
    State state;
    Hypothesis hyp;
  };
  std::deque<Node> queue{{{}, m.start(), Hypothesis::none()}};
  while (!queue.empty()) {
    Node n = std::move(queue.front());
    queue.pop_front();
    if (!n.hyp.is_none() && sem(n.hyp.index()) == language && stays_locked(m, n.state, n.hyp, symbols, ext_len)) {
      return n.seq;
    }
    if (n.seq.size() == max_len) continue;
    for (const auto& x : symbols) {
      auto step = m.step(n.state, x);
      if (!step) continue;
      FinSeq seq = n.seq;
      seq.push_back(x);
      queue.push_back({std::move(seq), step->next, step->hyp});
    }
  }
  return std::nullopt;
}

}  // namespace limitlab
