#include <doctest.h>

#include "limitlab/fixtures.hpp"
#include "limitlab/restrictions.hpp"
#include "limitlab/transforms.hpp"

using namespace limitlab;

namespace {

FinSeq seq(std::string_view s) { return parse_seq(s); }
Hypothesis base(const std::string& id) { return IndexExpr::base(id); }

VisitLog log_of(std::initializer_list<std::pair<Nat, Nat>> steps) {
  VisitLog v(State::of(0));
  for (auto [s, x] : steps) v = v.extended(State::of(s), Datum::number(x));
  return v;
}

Hypothesis hyp_after(const BmsLearner& m, const State& from, const FinSeq& s) {
  return std::get<BmsRun>(bms_run(m, from, s)).hyp;
}

EvalContext context() {
  EvalContext ctx(default_catalog());
  ctx.register_learner(fixture_multiples().to_bms());
  ctx.register_learner(fixture_revisit().to_bms());
  return ctx;
}

}  // namespace

TEST_CASE("visit logs") {
  const auto v = log_of({{1, 1}});
  CHECK(v.entries().size() == 2);
  CHECK(v.entries()[0] == VisitEntry{State::of(0), Datum::pause()});
  CHECK(v.last_state() == State::of(1));
  CHECK(v.contains(State::of(0)));
  CHECK_FALSE(v.contains(State::of(2)));
  CHECK_THROWS_AS(v.extended(State::of(0), Datum::number(2)), std::invalid_argument);
  CHECK(VisitLog::from_term(v.to_term()) == v);

  const auto c = fixture_revisit().to_bms();
  CHECK(v.consistent_with(c));
  CHECK_FALSE(log_of({{1, 2}}).consistent_with(c));
}

TEST_CASE("path replay") {
  CHECK(path_replay(log_of({{1, 1}}), State::of(1)).empty());
  CHECK(path_replay(log_of({{1, 1}}), State::of(0)) == seq("1"));
  CHECK(path_replay(log_of({{1, 1}, {2, 5}}), State::of(1)) == seq("5"));
  CHECK_THROWS_AS(path_replay(log_of({{1, 1}}), State::of(3)), MissingState);

  // The inclusive reading keeps the datum that entered the target state.
  CHECK(path_replay(log_of({{1, 1}, {2, 5}}), State::of(1), PathMode::inclusive) == seq("1,5"));
  CHECK(path_replay(log_of({{1, 1}}), State::of(0), PathMode::inclusive) == seq("#,1"));

  // Exclusive replay from the target walks back to the last logged state.
  const auto c = fixture_revisit().to_bms();
  const auto v = log_of({{1, 1}});
  CHECK(std::get<BmsRun>(bms_run(c, State::of(0), path_replay(v, State::of(0)))).state == v.last_state());
}

TEST_CASE("pump steps") {
  const auto c = fixture_revisit().to_bms();
  const auto fresh = pump_step(c, VisitLog(State::of(0)), Datum::number(1));
  REQUIRE_FALSE(diverged(fresh));
  CHECK(std::get<PumpStep>(fresh).pump == seq("1"));
  CHECK(std::get<PumpStep>(fresh).visit == log_of({{1, 1}}));

  const auto back = pump_step(c, log_of({{1, 1}}), Datum::number(2));
  CHECK(std::get<PumpStep>(back).pump == seq("2,1"));
  CHECK(std::get<PumpStep>(back).visit == log_of({{1, 1}}));

  CHECK(diverged(pump_step(fixture_multiples().to_bms(), VisitLog(State::of(0)), Datum::number(3))));
}

TEST_CASE("iterative to BMS") {
  const IterLearner it("two", [](const Hypothesis& prev, const Datum& x) -> std::optional<Hypothesis> {
    if (prev == base("p2") || (x.is_number() && x.value() % 4 != 0)) return base("p2");
    return base("p4");
  });
  const auto n = it_to_bms(it);
  CHECK(n.id() == "it2bms(two)");
  CHECK(n.start() == hypothesis_state(Hypothesis::none()));
  CHECK(n.start() == State::of(0));
  CHECK(std::get<BmsRun>(bms_run(n, {})).hyp.is_none());
  CHECK(hyp_after(n, n.start(), seq("4")) == std::get<Hypothesis>(iter_run(it, seq("4"))));
  CHECK(reachable_state_count(n, {2, 4}, 100) == 3);
  CHECK(state_hypothesis(hypothesis_state(base("p4"))) == base("p4"));
  CHECK(state_hypothesis(State::of(0)).is_none());
}

TEST_CASE("BMS to iterative") {
  const auto c = fixture_revisit().to_bms();
  const auto ic = bms_to_it(c);
  CHECK(ic.id() == "bms2it(C)");
  const auto h1 = std::get<Hypothesis>(iter_run(ic, seq("1")));
  CHECK(h1 == pad(base("c01").index(), log_of({{1, 1}}).to_term()));
  const auto h2 = std::get<Hypothesis>(iter_run(ic, seq("1,2")));
  CHECK(h2 == pad(hyp_after(c, State::of(1), seq("2,1")).index(), log_of({{1, 1}}).to_term()));
  CHECK(decode_visit(h2, c.start()) == log_of({{1, 1}}));
  CHECK(decode_visit(Hypothesis::none(), c.start()) == VisitLog(c.start()));

  const auto ia = bms_to_it(fixture_multiples().to_bms());
  CHECK(std::get<Hypothesis>(iter_run(ia, seq("4"))) == pad(base("p4").index(), VisitLog(State::of(0)).to_term()));
  CHECK(std::get<Hypothesis>(iter_run(ia, seq("4,2"))) == pad(base("p2").index(), log_of({{1, 2}}).to_term()));
  CHECK(diverged(iter_run(ia, seq("4,3"))));
}

TEST_CASE("equivalent texts") {
  const auto a = fixture_multiples().to_bms();
  const auto ea = equivalent_text(a, Text::parse("4,2|#"), 4);
  CHECK(ea.prefix == seq("4,2,#,#"));
  CHECK(ea.sim == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK_FALSE(ea.divergence);

  const auto c = fixture_revisit().to_bms();
  const auto ec = equivalent_text(c, Text::parse("1,2|#"), 4);
  REQUIRE(ec.prefix.size() >= 3);
  CHECK(FinSeq(ec.prefix.begin(), ec.prefix.begin() + 3) == seq("1,2,1"));
  CHECK(ec.sim[2] == 3);

  CHECK_THROWS_AS(equivalent_text(a, Text::parse("4|#"), 0), std::invalid_argument);
  const auto bad = equivalent_text(a, Text::parse("4,3|#"), 4);
  REQUIRE(bad.divergence);
  CHECK(bad.divergence->position == 1);

  const auto periodic = equivalent_text_periodic(c, Text::parse("1,2|#"), 8);
  REQUIRE(periodic);
  CHECK(expand(*periodic, 3) == seq("1,2,1"));
}

TEST_CASE("state decisive learners") {
  const auto c = fixture_revisit().to_bms();
  const auto n = state_decisive(c);
  CHECK(n.id() == "statedec(C)");
  const State after1(Term::list({Term::nat(1), log_of({{1, 1}}).to_term()}));
  const auto r1 = std::get<BmsRun>(bms_run(n, seq("1")));
  CHECK(r1.state == after1);
  const auto r2 = std::get<BmsRun>(bms_run(n, seq("1,2")));
  CHECK(r2.state == after1);
  CHECK(r2.hyp == hyp_after(c, State::of(1), seq("2,1")));

  CHECK(withdrawn_state_reentries(trace(c, Text::parse("1,2|1,2"), 32)) > 0);
  CHECK(withdrawn_state_reentries(trace(n, Text::parse("1,2|1,2"), 32)) == 0);

  // Fixture A never revisits, so its state decisive version says the same.
  const auto a = fixture_multiples().to_bms();
  const auto na = state_decisive(a);
  for (const auto& text : gen_texts(evens(), {}, 3, 16)) {
    const auto ta = trace(a, text, 40), tn = trace(na, text, 40);
    for (std::size_t t = 0; t < 40; ++t) CHECK(ta.at(t).hyp == tn.at(t).hyp);
  }
}

TEST_CASE("strongly conservative learners") {
  const auto ctx = context();
  const auto a = fixture_multiples().to_bms();
  const auto m = strongly_conservative(a);
  CHECK(m.id() == "sconv(A)");
  REQUIRE(m.factors_through());
  CHECK(m.factors_through()->id() == "A");
  CHECK(m({})->is_none());
  const auto g4 = *m(seq("4"));
  CHECK(g4 == IndexExpr::guarded("A", base("p4").index(), State::of(0)));
  CHECK(semantics(ctx, g4.index()) == multiples_of_4());
  const auto g2 = *m(seq("4,2"));
  CHECK(g2 == IndexExpr::guarded("A", base("p2").index(), State::of(1)));
  CHECK_FALSE(semantics(ctx, g4.index()).contains(2));

  const auto mb = strongly_conservative_bms(a);
  CHECK(hyp_after(mb, mb.start(), seq("4,2")) == g2);

  std::vector<Text> texts = gen_texts(multiples_of_4(), {}, 1, 16);
  const auto more = gen_texts(evens(), {}, 2, 16);
  texts.insert(texts.end(), more.begin(), more.end());
  CHECK(audit_local_conservativeness(m, texts, 24, ctx).empty());

  // Dropping back from L2 to L4 on datum 0, which L2 already contains.
  const HistoryLearner flip("flip", [](std::span<const Datum> s) -> std::optional<Hypothesis> {
    return s.size() % 2 ? base("p2") : base("p4");
  });
  const auto found = audit_local_conservativeness(flip, std::vector<Text>{Text::parse("0|0")}, 8, ctx);
  REQUIRE_FALSE(found.empty());
  CHECK(found.front().text_index == 0);
}

TEST_CASE("witness based learners") {
  const auto ctx = context();
  const auto a = fixture_multiples().to_bms();
  const auto w = witness_based(a);
  CHECK(w.id() == "wb(A)");

  const auto tr = trace(w, Text::parse("4,2|#"), 64);
  const auto eff = effective_positions(tr);
  REQUIRE(eff.size() == 2);
  CHECK(eff[0].index == IndexExpr::union_of({4}, IndexExpr::guarded("A", base("p4").index(), State::of(0))));
  CHECK(eff[1].index == IndexExpr::union_of({2, 4}, IndexExpr::guarded("A", base("p2").index(), State::of(1))));
  CHECK(check(Predicate::WB, tr, ctx).outcome == Outcome::holds);
  CHECK(semantics(ctx, eff[1].index).contains(2));
  CHECK_FALSE(semantics(ctx, eff[0].index).contains(2));

  // The repeated 2 is read as a pause, so no further conjecture appears.
  const auto dup = trace(w, Text::parse("4,2,2|#"), 64);
  CHECK(effective_positions(dup).size() == 2);
  CHECK(dup.at(2).hyp.is_none());

  const auto l4 = trace(w, Text::parse("0,4,8,12,16|#"), 64);
  CHECK(effective_positions(l4).size() == 1);
  for (std::size_t t = 1; t < 30; ++t) CHECK(l4.at(t).hyp.is_none());
  CHECK(check_ex(l4, ctx).outcome == Outcome::holds);

  CHECK(witness_based(strongly_conservative(a)).id() == "wb(A)");
  const HistoryLearner plain("plain", [](std::span<const Datum>) { return std::optional<Hypothesis>(Hypothesis::none()); });
  CHECK_THROWS_AS(witness_based(plain), std::invalid_argument);
}

TEST_CASE("locking sequences") {
  const auto ctx = context();
  const auto a = fixture_multiples().to_bms();
  CHECK(find_locking_sequence(a, multiples_of_4(), 3, 3, ctx) == seq("0"));
  CHECK(find_locking_sequence(a, evens(), 3, 3, ctx) == seq("2"));
  CHECK_FALSE(find_locking_sequence(fixture_revisit().to_bms(), {1}, 3, 2, ctx));
}

// Random total tables: exactness of it_to_bms, the simulation contract of
// bms_to_it, and decisiveness of state_decisive.
TEST_CASE("property: transform contracts on random tables") {
  Rng rng(23);
  EvalContext ctx(default_catalog());
  SemanticsCache sem(ctx);
  RandomTableParams params;
  params.none_probability = 0;
  params.undefined_probability = 0;
  TextGenParams tp;
  tp.count = 4;
  for (int i = 0; i < 40; ++i) {
    const auto iter = random_iter_table(rng, params, "I").to_iter();
    const auto n = it_to_bms(iter);
    const auto m = random_bms_table(rng, params, "M").to_bms();
    const auto mit = bms_to_it(m);
    const auto dec = state_decisive(m);
    for (const auto& text : gen_texts({0, 1, 2}, tp, 900 + i, 16)) {
      const auto full = expand(text, 24);
      for (std::size_t t = 1; t <= full.size(); ++t) {
        const std::span<const Datum> pre(full.data(), t);
        CHECK(std::get<BmsRun>(bms_run(n, pre)).hyp == std::get<Hypothesis>(iter_run(iter, pre)));
      }

      const auto eq = equivalent_text(m, text, 24);
      REQUIRE_FALSE(eq.divergence);
      for (std::size_t t = 1; t <= 24; ++t) {
        const FinSeq pumped(eq.prefix.begin(), eq.prefix.begin() + eq.sim[t]);
        CHECK(content(restrict(full, t)) == content(pumped));
        const auto it_hyp = std::get<Hypothesis>(iter_run(mit, std::span<const Datum>(full.data(), t)));
        const auto src_hyp = std::get<BmsRun>(bms_run(m, pumped)).hyp;
        CHECK(it_hyp.is_none() == src_hyp.is_none());
        if (!it_hyp.is_none()) CHECK(sem(it_hyp.index()) == sem(src_hyp.index()));
      }
      CHECK(withdrawn_state_reentries(trace(dec, text, 48)) == 0);
    }
  }
}
