#include "limitlab/fixtures.hpp"

#include <algorithm>

namespace limitlab {

NatSet multiples_of_4() { return {0, 4, 8, 12, 16}; }
NatSet evens() { return {0, 2, 4, 6, 8, 10, 12, 14, 16}; }

namespace {

std::string subset_id(unsigned mask) {
  std::string id = "s";
  for (unsigned x = 0; x < 3; ++x) {
    if (mask & (1u << x)) id += static_cast<char>('0' + x);
  }
  return id;
}

NatSet subset_elements(unsigned mask) {
  NatSet out;
  for (unsigned x = 0; x < 3; ++x) {
    if (mask & (1u << x)) out.insert(x);
  }
  return out;
}

TransitionTable::Row row(Nat from, std::optional<Datum> datum, Nat next, const std::string& hyp) {
  return {Term::nat(from), TableDatum{datum}, Term::nat(next), IndexExpr::base(hyp)};
}

}  // namespace

Catalog default_catalog() {
  Catalog c;
  c.universe_max = 16;
  c.entries["p4"] = {multiples_of_4(), {}};
  c.entries["p2"] = {evens(), {}};
  for (unsigned mask = 0; mask < 8; ++mask) c.entries[subset_id(mask)] = {subset_elements(mask), {}};
  c.entries["d01"] = {{0, 1}, {}};
  c.entries["d2"] = {{2}, {}};
  c.entries["d012"] = {{0, 1, 2}, {{2, 5}}};
  c.entries["c01"] = {{1}, {}};
  c.entries["c02"] = {{2}, {}};
  c.entries["c0p"] = {{0}, {}};
  c.entries["c11"] = {{1, 3}, {}};
  c.entries["c12"] = {{1, 2}, {}};
  c.entries["c1p"] = {{3}, {}};
  c.entries["p"] = {{1}, {}};
  c.entries["q"] = {{1}, {}};
  c.entries["p'"] = {{1}, {}};
  return c;
}

std::vector<std::string> small_language_ids() {
  std::vector<std::string> ids;
  for (unsigned mask = 0; mask < 8; ++mask) ids.push_back(subset_id(mask));
  ids.insert(ids.end(), {"d01", "d2", "d012"});
  return ids;
}

TransitionTable fixture_multiples() {
  TransitionTable t;
  t.id = "A";
  t.start = Term::nat(0);
  for (Nat x = 0; x <= 16; x += 2) {
    const bool stays = x % 4 == 0;
    t.rows.push_back(row(0, Datum::number(x), stays ? 0 : 1, stays ? "p4" : "p2"));
    t.rows.push_back(row(1, Datum::number(x), 1, "p2"));
  }
  t.rows.push_back(row(0, Datum::pause(), 0, "p4"));
  t.rows.push_back(row(1, Datum::pause(), 1, "p2"));
  t.provenance = {{"fixture", "multiples"}};
  return t;
}

TransitionTable fixture_revisit() {
  TransitionTable t;
  t.id = "C";
  t.start = Term::nat(0);
  t.rows = {
      row(0, Datum::number(1), 1, "c01"), row(0, Datum::number(2), 0, "c02"), row(0, Datum::pause(), 0, "c0p"),
      row(1, Datum::number(1), 1, "c11"), row(1, Datum::number(2), 0, "c12"), row(1, Datum::pause(), 1, "c1p"),
  };
  t.provenance = {{"fixture", "revisit"}};
  return t;
}

TransitionTable fixture_u_shape() {
  TransitionTable t;
  t.id = "U";
  t.start = Term::nat(0);
  t.rows = {row(0, std::nullopt, 1, "p"), row(1, std::nullopt, 2, "q"), row(2, std::nullopt, 3, "p'"),
            row(3, std::nullopt, 3, "p'")};
  t.provenance = {{"fixture", "u_shape"}};
  return t;
}

TransitionTable fixture(const std::string& name) {
  if (name == "A" || name == "multiples") return fixture_multiples();
  if (name == "C" || name == "revisit") return fixture_revisit();
  if (name == "U" || name == "u_shape") return fixture_u_shape();
  throw std::invalid_argument("unknown fixture '" + name + "'");
}

BmsLearner counter_learner() {
  return BmsLearner("B", State::of(0), [](const State& s, const Datum&) -> std::optional<Transition> {
    if (!s.term.is_nat()) return std::nullopt;
    return Transition{State::of(s.term.as_nat() + 1), IndexExpr::base("p2")};
  });
}

BmsLearner fixture_learner(const std::string& name) {
  if (name == "B" || name == "counter") return counter_learner();
  return fixture(name).to_bms();
}

std::vector<Text> gen_texts(const NatSet& language, const TextGenParams& params, std::uint64_t seed,
                            Nat universe_max) {
  if (!language.empty() && *language.rbegin() > universe_max) {
    throw ConfigError("language " + format_set(language) + " leaves the universe 0.." + std::to_string(universe_max));
  }
  const FinSeq sorted = [&] {
    FinSeq s;
    for (Nat x : language) s.push_back(Datum::number(x));
    return s;
  }();
  const FinSeq pause{Datum::pause()};

  std::vector<Text> out;
  auto add = [&](Text t) {
    if (out.size() < params.count && std::find(out.begin(), out.end(), t) == out.end()) out.push_back(std::move(t));
  };
  add(Text(sorted, pause));
  FinSeq interleaved;
  for (const auto& x : sorted) {
    interleaved.push_back(Datum::pause());
    interleaved.push_back(x);
  }
  add(Text(interleaved, pause));
  FinSeq reversed(sorted.rbegin(), sorted.rend());
  reversed.insert(reversed.begin(), {Datum::pause(), Datum::pause()});
  add(Text(reversed, pause));

  std::vector<Datum> symbols(sorted.begin(), sorted.end());
  symbols.push_back(Datum::pause());
  Rng rng(seed);
  const std::size_t max_head = std::max(params.max_head, sorted.size());
  // Random texts can coincide with earlier ones, so cap the attempts.
  for (std::size_t attempt = 0; out.size() < params.count && attempt < 50 * params.count; ++attempt) {
    FinSeq head = sorted;
    const std::size_t extra = rng.below(max_head - sorted.size() + 1);
    for (std::size_t i = 0; i < extra; ++i) head.push_back(symbols[rng.below(symbols.size())]);
    for (std::size_t i = head.size(); i > 1; --i) std::swap(head[i - 1], head[rng.below(i)]);
    FinSeq tail;
    const std::size_t tail_len = 1 + rng.below(std::max<std::size_t>(params.max_tail, 1));
    for (std::size_t i = 0; i < tail_len; ++i) tail.push_back(symbols[rng.below(symbols.size())]);
    add(Text(std::move(head), std::move(tail)));
  }
  return out;
}

namespace {

std::vector<std::string> pick_hypotheses(Rng& rng, const RandomTableParams& params) {
  if (params.hypotheses.empty()) throw std::invalid_argument("random tables need a hypothesis pool");
  std::vector<std::string> pool = params.hypotheses;
  for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.below(i)]);
  pool.resize(1 + rng.below(std::min<std::size_t>(pool.size(), 4)));
  return pool;
}

Hypothesis draw_hypothesis(Rng& rng, const RandomTableParams& params, const std::vector<std::string>& pool) {
  if (rng.chance(params.none_probability)) return Hypothesis::none();
  return IndexExpr::base(pool[rng.below(pool.size())]);
}

std::vector<Datum> table_symbols(const NatSet& alphabet) {
  std::vector<Datum> out;
  for (Nat x : alphabet) out.push_back(Datum::number(x));
  out.push_back(Datum::pause());
  return out;
}

}  // namespace

TransitionTable random_bms_table(Rng& rng, const RandomTableParams& params, const std::string& id) {
  TransitionTable t;
  t.id = id;
  t.start = Term::nat(0);
  const auto pool = pick_hypotheses(rng, params);
  const Nat n = 1 + rng.below(std::max<std::size_t>(params.max_states, 1));
  for (Nat s = 0; s < n; ++s) {
    for (const auto& x : table_symbols(params.alphabet)) {
      if (rng.chance(params.undefined_probability)) continue;
      t.rows.push_back({Term::nat(s), TableDatum{x}, Term::nat(rng.below(n)), draw_hypothesis(rng, params, pool)});
    }
  }
  t.provenance = {{"generator", "random_bms_table"}};
  return t;
}

TransitionTable random_iter_table(Rng& rng, const RandomTableParams& params, const std::string& id) {
  TransitionTable t;
  t.id = id;
  t.iterative = true;
  const auto pool = pick_hypotheses(rng, params);
  std::vector<Hypothesis> previous{Hypothesis::none()};
  for (const auto& h : pool) previous.push_back(IndexExpr::base(h));
  for (const auto& prev : previous) {
    for (const auto& x : table_symbols(params.alphabet)) {
      if (rng.chance(params.undefined_probability)) continue;
      t.rows.push_back({prev.term(), TableDatum{x}, Term(), draw_hypothesis(rng, params, pool)});
    }
  }
  t.provenance = {{"generator", "random_iter_table"}};
  return t;
}

}  // namespace limitlab
