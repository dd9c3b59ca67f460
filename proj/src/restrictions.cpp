#include "limitlab/restrictions.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace limitlab {

std::string to_string(Predicate p) {
  switch (p) {
    case Predicate::T: return "T";
    case Predicate::EX: return "EX";
    case Predicate::BMS_STAR: return "BMS_STAR";
    case Predicate::CONV: return "CONV";
    case Predicate::DEC: return "DEC";
    case Predicate::CAUT: return "CAUT";
    case Predicate::WMON: return "WMON";
    case Predicate::MON: return "MON";
    case Predicate::SMON: return "SMON";
    case Predicate::NU: return "NU";
    case Predicate::SNU: return "SNU";
    case Predicate::SDEC: return "SDEC";
    case Predicate::WB: return "WB";
  }
  return "?";
}

Predicate parse_predicate(std::string_view tag) {
  std::string upper(tag);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  for (auto p : {Predicate::T, Predicate::EX, Predicate::BMS_STAR, Predicate::CONV, Predicate::DEC,
                 Predicate::CAUT, Predicate::WMON, Predicate::MON, Predicate::SMON, Predicate::NU,
                 Predicate::SNU, Predicate::SDEC, Predicate::WB}) {
    if (to_string(p) == upper) return p;
  }
  if (upper == "BMS*" || upper == "BMSSTAR") return Predicate::BMS_STAR;
  throw std::invalid_argument("unknown predicate '" + std::string(tag) + "'");
}

const std::vector<Predicate>& restriction_predicates() {
  static const std::vector<Predicate> all{Predicate::CONV, Predicate::DEC,  Predicate::CAUT, Predicate::WMON,
                                          Predicate::MON,  Predicate::SMON, Predicate::NU,   Predicate::SNU,
                                          Predicate::SDEC, Predicate::WB,   Predicate::T};
  return all;
}

bool is_semantic(Predicate p) {
  switch (p) {
    case Predicate::CAUT:
    case Predicate::DEC:
    case Predicate::MON:
    case Predicate::SMON:
    case Predicate::WMON:
    case Predicate::NU:
    case Predicate::T:
      return true;
    default:
      return false;
  }
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::holds: return "HOLDS";
    case Outcome::violated: return "VIOLATED";
    case Outcome::undetermined: return "UNDETERMINED";
  }
  return "?";
}

std::vector<EffectivePosition> effective_positions(const Trace& tr) {
  std::vector<EffectivePosition> out;
  for (const auto& r : tr.records) {
    if (!r.hyp.is_none()) out.push_back({r.time, r.hyp.index()});
  }
  return out;
}

namespace {

constexpr int kNone = -1;

/// Flattened view of the learning sequence over a window long enough to
/// decide every quantified formula, with all set relations precomputed over
/// the few distinct languages and contents involved.
struct Window {
  std::size_t length = 0;
  bool determined = false;
  std::vector<int> syn;  // structural id, kNone for ?
  std::vector<int> sem;  // language class id, kNone for ?
  std::vector<int> con;  // id of content(T[i+1])

  std::vector<NatSet> languages;
  std::vector<NatSet> contents;
  NatSet target;

  std::vector<std::vector<char>> sub;     // W_a ⊆ W_b
  std::vector<std::vector<char>> con_in;  // C_c ⊆ W_a
  std::vector<std::vector<char>> mon;     // W_a ∩ C_T ⊆ W_b ∩ C_T
  std::vector<char> correct;              // W_a = C_T
  std::vector<std::vector<std::vector<char>>> witnessed;  // C_c ∩ (W_t \ W_r) ≠ ∅ as [c][t][r]

  bool eff(std::size_t i) const { return syn[i] != kNone; }
};

bool subset(const NatSet& a, const NatSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

NatSet intersect(const NatSet& a, const NatSet& b) {
  NatSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

std::size_t window_length(const Trace& tr) {
  if (!tr.cycle) return tr.records.size();
  const auto periodic_from = std::max(tr.cycle->start, tr.text.head.size() + tr.text.tail.size());
  return periodic_from + 3 * tr.cycle->period + 1;
}

Window make_window(const Trace& tr, SemanticsCache& cache) {
  Window w;
  w.length = window_length(tr);
  w.determined = tr.complete();
  w.target = content(tr.text);
  std::map<Term, int> syn_ids;
  std::map<NatSet, int> sem_ids;
  std::map<NatSet, int> con_ids;
  NatSet seen;
  for (std::size_t i = 0; i < w.length; ++i) {
    const auto x = tr.text.at(i);
    if (x.is_number()) seen.insert(x.value());
    auto [cit, cfresh] = con_ids.emplace(seen, static_cast<int>(w.contents.size()));
    if (cfresh) w.contents.push_back(seen);
    w.con.push_back(cit->second);

    const auto& hyp = tr.at(i).hyp;
    if (hyp.is_none()) {
      w.syn.push_back(kNone);
      w.sem.push_back(kNone);
      continue;
    }
    w.syn.push_back(syn_ids.emplace(hyp.term(), static_cast<int>(syn_ids.size())).first->second);
    const auto& lang = cache(hyp.index());
    auto [sit, sfresh] = sem_ids.emplace(lang, static_cast<int>(w.languages.size()));
    if (sfresh) w.languages.push_back(lang);
    w.sem.push_back(sit->second);
  }

  const auto k = w.languages.size();
  const auto nc = w.contents.size();
  w.sub.assign(k, std::vector<char>(k, 0));
  w.mon.assign(k, std::vector<char>(k, 0));
  w.correct.assign(k, 0);
  std::vector<NatSet> on_target;
  for (const auto& l : w.languages) on_target.push_back(intersect(l, w.target));
  for (std::size_t a = 0; a < k; ++a) {
    w.correct[a] = w.languages[a] == w.target;
    for (std::size_t b = 0; b < k; ++b) {
      w.sub[a][b] = subset(w.languages[a], w.languages[b]);
      w.mon[a][b] = subset(on_target[a], on_target[b]);
    }
  }
  w.con_in.assign(nc, std::vector<char>(k, 0));
  w.witnessed.assign(nc, std::vector<std::vector<char>>(k, std::vector<char>(k, 0)));
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t a = 0; a < k; ++a) {
      w.con_in[c][a] = subset(w.contents[c], w.languages[a]);
      for (std::size_t r = 0; r < k; ++r) {
        const auto& cs = w.contents[c];
        w.witnessed[c][a][r] = std::any_of(cs.begin(), cs.end(), [&](Nat x) {
          return w.languages[a].contains(x) && !w.languages[r].contains(x);
        });
      }
    }
  }
  return w;
}

/// Instance test on window positions; `r` is ignored by two-index predicates.
bool instance_violated(Predicate p, const Window& w, std::size_t r, std::size_t s, std::size_t t) {
  switch (p) {
    case Predicate::CONV:
      return w.con_in[w.con[t]][w.sem[s]] && w.syn[s] != w.syn[t];
    case Predicate::CAUT:
      return w.sub[w.sem[t]][w.sem[s]] && w.sem[t] != w.sem[s];
    case Predicate::WMON:
      return w.con_in[w.con[t]][w.sem[s]] && !w.sub[w.sem[s]][w.sem[t]];
    case Predicate::MON:
      return !w.mon[w.sem[s]][w.sem[t]];
    case Predicate::SMON:
      return !w.sub[w.sem[s]][w.sem[t]];
    case Predicate::DEC:
      return w.sem[r] == w.sem[t] && w.sem[r] != w.sem[s];
    case Predicate::NU:
      return w.sem[r] == w.sem[t] && w.correct[w.sem[r]] && w.sem[r] != w.sem[s];
    case Predicate::SNU:
      return w.sem[r] == w.sem[t] && w.correct[w.sem[r]] && w.syn[r] != w.syn[s];
    case Predicate::SDEC:
      return w.sem[r] == w.sem[t] && w.syn[r] != w.syn[s];
    case Predicate::WB:
      return r < s && w.syn[r] != w.syn[s] && !w.witnessed[w.con[s]][w.sem[t]][w.sem[r]];
    default:
      return false;
  }
}

bool is_ternary(Predicate p) {
  return p == Predicate::DEC || p == Predicate::NU || p == Predicate::SNU || p == Predicate::SDEC ||
         p == Predicate::WB;
}

bool prefers_proper_triple(Predicate p) {
  return p == Predicate::DEC || p == Predicate::NU || p == Predicate::SNU || p == Predicate::SDEC;
}

std::optional<Witness> search_binary(Predicate p, const Window& w) {
  for (std::size_t t = 0; t < w.length; ++t) {
    if (!w.eff(t)) continue;
    for (std::size_t s = 0; s <= t; ++s) {
      if (w.eff(s) && instance_violated(p, w, s, s, t)) return Witness{s, s, t};
    }
  }
  return std::nullopt;
}

std::optional<Witness> search_ternary(Predicate p, const Window& w, bool proper_only) {
  for (std::size_t t = 0; t < w.length; ++t) {
    if (!w.eff(t)) continue;
    if ((p == Predicate::NU || p == Predicate::SNU) && !w.correct[w.sem[t]]) continue;
    for (std::size_t s = 0; s <= t; ++s) {
      if (!w.eff(s) || (proper_only && s == t)) continue;
      for (std::size_t r = 0; r <= s; ++r) {
        if (!w.eff(r) || (proper_only && r == s)) continue;
        if (instance_violated(p, w, r, s, t)) return Witness{r, s, t};
      }
    }
  }
  return std::nullopt;
}

Verdict finish(Predicate p, const Window& w, std::optional<Witness> found) {
  Verdict v{p, Outcome::holds, std::nullopt, {}};
  if (found) {
    v.outcome = Outcome::violated;
    v.witness = found;
  } else if (!w.determined) {
    v.outcome = Outcome::undetermined;
    v.note = "no violation within the recorded prefix; budget exhausted before a cycle";
  }
  return v;
}

}  // namespace

Verdict check(Predicate pred, const Trace& tr, SemanticsCache& sem) {
  switch (pred) {
    case Predicate::T:
      return {pred, Outcome::holds, std::nullopt, {}};
    case Predicate::EX:
      return check_ex(tr, sem);
    case Predicate::BMS_STAR:
      return check_bms_star(tr);
    default:
      break;
  }
  const auto w = make_window(tr, sem);
  std::optional<Witness> found;
  if (!is_ternary(pred)) {
    found = search_binary(pred, w);
  } else {
    if (prefers_proper_triple(pred)) found = search_ternary(pred, w, true);
    if (!found) found = search_ternary(pred, w, false);
  }
  return finish(pred, w, found);
}

Verdict check(Predicate pred, const Trace& tr, const EvalContext& ctx) {
  SemanticsCache sem(ctx);
  return check(pred, tr, sem);
}

Verdict check_ex(const Trace& tr, SemanticsCache& sem) {
  Verdict v{Predicate::EX, Outcome::violated, std::nullopt, {}};
  if (tr.divergence) {
    v.note = "learner undefined at text position " + std::to_string(*tr.divergence);
    return v;
  }
  if (!tr.cycle) {
    v.outcome = Outcome::undetermined;
    v.note = "budget exhausted before a cycle";
    return v;
  }
  const auto& recs = tr.records;
  std::optional<Hypothesis> final_hyp;
  for (std::size_t i = tr.cycle->start; i < recs.size(); ++i) {
    if (recs[i].hyp.is_none()) continue;
    if (final_hyp && *final_hyp != recs[i].hyp) {
      v.note = "conjectures keep changing inside the cycle";
      return v;
    }
    final_hyp = recs[i].hyp;
  }
  if (!final_hyp) {
    for (auto it = recs.rbegin(); it != recs.rend(); ++it) {
      if (!it->hyp.is_none()) {
        final_hyp = it->hyp;
        break;
      }
    }
  }
  if (!final_hyp) {
    v.note = "no conjecture is ever emitted";
    return v;
  }
  const auto& lang = sem(final_hyp->index());
  const auto target = content(tr.text);
  if (lang != target) {
    v.note = "final conjecture " + final_hyp->to_string() + " names " + format_set(lang) + ", content is " +
             format_set(target);
    return v;
  }
  std::size_t t0 = recs.size();
  for (std::size_t i = recs.size(); i-- > 0;) {
    if (recs[i].hyp.is_none()) continue;
    if (recs[i].hyp != *final_hyp) break;
    t0 = i;
  }
  v.outcome = Outcome::holds;
  v.note = "converged at time " + std::to_string(t0) + " on " + final_hyp->to_string();
  return v;
}

Verdict check_ex(const Trace& tr, const EvalContext& ctx) {
  SemanticsCache sem(ctx);
  return check_ex(tr, sem);
}

Verdict check_bms_star(const Trace& tr) {
  const auto visited = visited_states(tr);
  Verdict v{Predicate::BMS_STAR, Outcome::holds, std::nullopt, {}};
  v.note = std::to_string(visited.states.size()) + " distinct states recorded";
  if (visited.verdict == StateVerdict::undetermined) v.outcome = Outcome::undetermined;
  return v;
}

bool replay_witness(Predicate pred, const Trace& tr, SemanticsCache& sem, const Witness& w) {
  if (!(w.r <= w.s && w.s <= w.t)) return false;
  if (!tr.defined_at(w.t)) return false;
  const auto& hr = tr.at(w.r).hyp;
  const auto& hs = tr.at(w.s).hyp;
  const auto& ht = tr.at(w.t).hyp;
  if (hr.is_none() || hs.is_none() || ht.is_none()) return false;
  const auto& wr = sem(hr.index());
  const auto& ws = sem(hs.index());
  const auto& wt = sem(ht.index());
  const auto target = content(tr.text);
  const auto seen_s = content(expand(tr.text, w.s + 1));
  const auto seen_t = content(expand(tr.text, w.t + 1));
  switch (pred) {
    case Predicate::CONV:
      return is_consistent(expand(tr.text, w.t + 1), ws) && hs != ht;
    case Predicate::CAUT:
      return subset(wt, ws) && wt != ws;
    case Predicate::WMON:
      return subset(seen_t, ws) && !subset(ws, wt);
    case Predicate::MON:
      return !subset(intersect(ws, target), intersect(wt, target));
    case Predicate::SMON:
      return !subset(ws, wt);
    case Predicate::DEC:
      return wr == wt && wr != ws;
    case Predicate::NU:
      return wr == wt && wt == target && wr != ws;
    case Predicate::SNU:
      return wr == wt && wt == target && hr != hs;
    case Predicate::SDEC:
      return wr == wt && hr != hs;
    case Predicate::WB: {
      if (!(w.r < w.s) || hr == hs) return false;
      return std::none_of(seen_s.begin(), seen_s.end(), [&](Nat x) { return wt.contains(x) && !wr.contains(x); });
    }
    default:
      return false;
  }
}

const std::vector<Implication>& backbone_implications() {
  using P = Predicate;
  static const std::vector<Implication> all{
      {P::CONV, {P::SNU, P::WMON}},
      {P::SDEC, {P::DEC, P::SNU}},
      {P::SMON, {P::CAUT, P::DEC, P::MON, P::WMON}},
      {P::DEC, {P::NU}},
      {P::WMON, {P::NU}},
      {P::SNU, {P::NU}},
      {P::WB, {P::CONV, P::SDEC, P::CAUT}},
  };
  return all;
}

nlohmann::json AuditReport::to_json() const {
  auto found = nlohmann::json::array();
  for (const auto& f : violations) {
    nlohmann::json item{{"trace", f.trace_index},
                        {"antecedent", to_string(f.antecedent)},
                        {"consequent", to_string(f.consequent)}};
    if (f.consequent_verdict.witness) {
      const auto& w = *f.consequent_verdict.witness;
      item["witness"] = {w.r, w.s, w.t};
    }
    found.push_back(std::move(item));
  }
  return {{"traces", traces},
          {"instances_checked", instances_checked},
          {"undetermined_skipped", undetermined_skipped},
          {"violations", std::move(found)}};
}

AuditReport implication_audit(std::span<const Trace> traces, const EvalContext& ctx) {
  AuditReport report;
  report.traces = traces.size();
  SemanticsCache sem(ctx);
  for (std::size_t i = 0; i < traces.size(); ++i) {
    std::map<Predicate, Verdict> verdicts;
    auto verdict = [&](Predicate p) -> const Verdict& {
      auto it = verdicts.find(p);
      if (it == verdicts.end()) it = verdicts.emplace(p, check(p, traces[i], sem)).first;
      return it->second;
    };
    for (const auto& imp : backbone_implications()) {
      if (verdict(imp.antecedent).outcome != Outcome::holds) continue;
      for (auto c : imp.consequents) {
        const auto& v = verdict(c);
        if (v.outcome == Outcome::undetermined) {
          ++report.undetermined_skipped;
          continue;
        }
        ++report.instances_checked;
        if (v.outcome == Outcome::violated) report.violations.push_back({i, imp.antecedent, c, v});
      }
    }
  }
  return report;
}

nlohmann::json verdict_report(const Verdict& v, const Trace& tr, SemanticsCache& sem) {
  nlohmann::json j{{"predicate", to_string(v.predicate)}, {"outcome", to_string(v.outcome)}};
  if (!v.note.empty()) j["note"] = v.note;
  if (v.witness) {
    const auto& w = *v.witness;
    j["witness"] = {w.r, w.s, w.t};
    auto involved = nlohmann::json::array();
    std::vector<std::size_t> times{w.r, w.s, w.t};
    times.erase(std::unique(times.begin(), times.end()), times.end());
    for (auto t : times) {
      const auto& h = tr.at(t).hyp;
      nlohmann::json item{{"time", t}, {"hyp", h.to_json()}};
      if (!h.is_none()) {
        const auto& lang = sem(h.index());
        item["semantics"] = std::vector<Nat>(lang.begin(), lang.end());
      }
      involved.push_back(std::move(item));
    }
    j["involved"] = std::move(involved);
  }
  return j;
}

}  // namespace limitlab
