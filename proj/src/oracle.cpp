#include "limitlab/oracle.hpp"

#include <algorithm>

namespace limitlab {

OracleExplosion::OracleExplosion(std::size_t count, std::size_t limit)
    : std::runtime_error("oracle refuses " + std::to_string(count) + " sequences (limit " + std::to_string(limit) +
                         ")"),
      count(count) {}

std::size_t oracle_sequence_count(std::size_t symbols, std::size_t max_len) {
  std::size_t total = 0;
  std::size_t level = 1;
  for (std::size_t len = 0; len <= max_len; ++len) {
    total += level;
    if (total > kOracleSequenceLimit) return total;
    level *= symbols;
  }
  return total;
}

std::size_t oracle_horizon(std::size_t head_length, std::size_t reachable_states) {
  const std::size_t n = head_length + 1;  // head plus the one-symbol tail
  const std::size_t s = reachable_states + 1;
  return std::max(2 * n * s, 2 * (n + 4 * s));
}

namespace {

/// Lazily filled boolean relation over interned ids.
class Relation {
 public:
  template <class F>
  bool operator()(int a, int b, F compute) {
    auto [it, fresh] = memo_.try_emplace({a, b}, false);
    if (fresh) it->second = compute();
    return it->second;
  }

 private:
  std::map<std::pair<int, int>, bool> memo_;
};

template <class T>
int intern(std::map<T, int>& ids, std::vector<T>& values, const T& v) {
  auto [it, fresh] = ids.emplace(v, static_cast<int>(values.size()));
  if (fresh) values.push_back(v);
  return it->second;
}

bool includes(const NatSet& big, const NatSet& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

std::map<Predicate, Outcome> oracle_verdicts(const BmsLearner& m, const FinSeq& head, std::size_t reachable_states,
                                             SemanticsCache& sem) {
  const std::size_t horizon = oracle_horizon(head.size(), reachable_states);

  // Plain run over head ⌢ #^(horizon-|head|); no cycle detection.
  std::vector<Hypothesis> hyps;
  State s = m.start();
  for (std::size_t i = 0; i < horizon; ++i) {
    const Datum x = i < head.size() ? head[i] : Datum::pause();
    auto step = m.step(s, x);
    if (!step) break;
    hyps.push_back(step->hyp);
    s = step->next;
  }
  const bool diverged = hyps.size() < horizon;
  const std::size_t n = hyps.size();

  std::map<NatSet, int> lang_ids, con_ids;
  std::vector<NatSet> langs, cons;
  std::map<Term, int> syn_ids;
  std::vector<Term> syns;
  std::vector<int> W(n, -1), C(n), H(n, -1);
  NatSet seen;
  for (std::size_t i = 0; i < n; ++i) {
    const Datum x = i < head.size() ? head[i] : Datum::pause();
    if (x.is_number()) seen.insert(x.value());
    C[i] = intern(con_ids, cons, seen);
    if (hyps[i].is_none()) continue;
    W[i] = intern(lang_ids, langs, sem(hyps[i].index()));
    H[i] = intern(syn_ids, syns, hyps[i].term());
  }
  const NatSet target = content(head);
  auto eff = [&](std::size_t i) { return W[i] >= 0; };

  Relation sub_rel, con_rel, mon_rel, wit_rel;
  auto sub = [&](int a, int b) { return sub_rel(a, b, [&] { return includes(langs[b], langs[a]); }); };
  auto con_in = [&](int c, int a) { return con_rel(c, a, [&] { return includes(langs[a], cons[c]); }); };
  auto mon = [&](int a, int b) {
    return mon_rel(a, b, [&] {
      for (Nat x : langs[a]) {
        if (target.contains(x) && !langs[b].contains(x)) return false;
      }
      return true;
    });
  };
  // C_c ∩ (W_t \ W_r) ≠ ∅, keyed by (c, t * |langs| + r)
  auto witnessed = [&](int c, int t, int r) {
    return wit_rel(c, t * static_cast<int>(langs.size() + 1) + r, [&] {
      for (Nat x : cons[c]) {
        if (langs[t].contains(x) && !langs[r].contains(x)) return true;
      }
      return false;
    });
  };
  auto correct = [&](int a) { return langs[a] == target; };

  auto any_pair = [&](auto violates) {
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t s2 = 0; s2 <= t; ++s2) {
        if (eff(s2) && eff(t) && violates(s2, t)) return true;
      }
    }
    return false;
  };
  auto any_triple = [&](auto violates) {
    for (std::size_t t = 0; t < n; ++t) {
      if (!eff(t)) continue;
      for (std::size_t s2 = 0; s2 <= t; ++s2) {
        if (!eff(s2)) continue;
        for (std::size_t r = 0; r <= s2; ++r) {
          if (eff(r) && violates(r, s2, t)) return true;
        }
      }
    }
    return false;
  };

  std::map<Predicate, bool> violated;
  violated[Predicate::T] = false;
  violated[Predicate::BMS_STAR] = false;  // finitely many states reachable
  violated[Predicate::CONV] = any_pair([&](auto a, auto b) { return con_in(C[b], W[a]) && H[a] != H[b]; });
  violated[Predicate::CAUT] = any_pair([&](auto a, auto b) { return sub(W[b], W[a]) && W[a] != W[b]; });
  violated[Predicate::WMON] = any_pair([&](auto a, auto b) { return con_in(C[b], W[a]) && !sub(W[a], W[b]); });
  violated[Predicate::MON] = any_pair([&](auto a, auto b) { return !mon(W[a], W[b]); });
  violated[Predicate::SMON] = any_pair([&](auto a, auto b) { return !sub(W[a], W[b]); });
  violated[Predicate::DEC] = any_triple([&](auto r, auto a, auto b) { return W[r] == W[b] && W[r] != W[a]; });
  violated[Predicate::NU] =
      any_triple([&](auto r, auto a, auto b) { return W[r] == W[b] && correct(W[r]) && W[r] != W[a]; });
  violated[Predicate::SNU] =
      any_triple([&](auto r, auto a, auto b) { return W[r] == W[b] && correct(W[r]) && H[r] != H[a]; });
  violated[Predicate::SDEC] = any_triple([&](auto r, auto a, auto b) { return W[r] == W[b] && H[r] != H[a]; });
  violated[Predicate::WB] =
      any_triple([&](auto r, auto a, auto b) { return r < a && H[r] != H[a] && !witnessed(C[a], W[b], W[r]); });

  // EX: some correct conjecture at t0 in the first half after which every
  // conjecture up to the horizon is the same or `?`.
  bool ex = false;
  if (!diverged) {
    for (std::size_t t0 = 0; t0 < horizon / 2 && !ex; ++t0) {
      if (!eff(t0) || !correct(W[t0])) continue;
      bool stable = true;
      for (std::size_t t = t0; t < n && stable; ++t) stable = !eff(t) || H[t] == H[t0];
      ex = stable;
    }
  }
  violated[Predicate::EX] = !ex;

  std::map<Predicate, Outcome> out;
  for (const auto& [p, v] : violated) out[p] = v ? Outcome::violated : Outcome::holds;
  return out;
}

OracleTable brute_force_oracle(const BmsLearner& m, const NatSet& alphabet, std::size_t max_len,
                               const EvalContext& ctx, std::size_t state_cap) {
  std::vector<Datum> symbols;
  for (Nat x : alphabet) symbols.push_back(Datum::number(x));
  symbols.push_back(Datum::pause());
  const auto count = oracle_sequence_count(symbols.size(), max_len);
  if (count > kOracleSequenceLimit) throw OracleExplosion(count, kOracleSequenceLimit);

  OracleTable table;
  table.sequences = count;
  table.reachable_states = reachable_state_count(m, alphabet, state_cap + 1);
  if (table.reachable_states > state_cap) {
    throw std::invalid_argument("learner " + m.id() + " reaches more than " + std::to_string(state_cap) +
                                " states over the alphabet");
  }

  SemanticsCache sem(ctx);
  // Breadth-first by length, extending each run by one symbol.
  std::vector<OracleRun> level{{{}, m.start(), Hypothesis::none(), std::nullopt}};
  for (std::size_t len = 0;; ++len) {
    for (const auto& run : level) {
      table.runs.push_back(run);
      if (!run.seq.empty()) table.verdicts.push_back({run.seq, oracle_verdicts(m, run.seq, table.reachable_states, sem)});
    }
    if (len == max_len) break;
    std::vector<OracleRun> next;
    for (const auto& run : level) {
      for (const auto& x : symbols) {
        OracleRun ext{run.seq, std::nullopt, Hypothesis::none(), run.divergence};
        ext.seq.push_back(x);
        if (run.state) {
          if (auto step = m.step(*run.state, x)) {
            ext.state = step->next;
            ext.hyp = step->hyp;
          } else {
            ext.divergence = len;
          }
        }
        next.push_back(std::move(ext));
      }
    }
    level = std::move(next);
  }
  return table;
}

nlohmann::json OracleTable::to_json() const {
  nlohmann::json j;
  j["sequences"] = sequences;
  j["reachable_states"] = reachable_states;
  auto rs = nlohmann::json::array();
  for (const auto& r : runs) {
    nlohmann::json row{{"seq", format_seq(r.seq)}, {"hyp", r.hyp.to_json()}};
    row["state"] = r.state ? r.state->term.to_json() : nlohmann::json(nullptr);
    if (r.divergence) row["divergence"] = *r.divergence;
    rs.push_back(std::move(row));
  }
  j["runs"] = std::move(rs);
  auto vs = nlohmann::json::array();
  for (const auto& v : verdicts) {
    nlohmann::json row{{"text", Text(v.head, {Datum::pause()}).to_string()}};
    for (const auto& [p, o] : v.outcomes) row["verdicts"][to_string(p)] = to_string(o);
    vs.push_back(std::move(row));
  }
  j["verdicts"] = std::move(vs);
  return j;
}

}  // namespace limitlab
