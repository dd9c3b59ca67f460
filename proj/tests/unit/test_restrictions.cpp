#include <doctest.h>

#include "limitlab/fixtures.hpp"
#include "limitlab/restrictions.hpp"

using namespace limitlab;

namespace {

Hypothesis base(const std::string& id) { return IndexExpr::base(id); }

EvalContext context() {
  EvalContext ctx(default_catalog());
  ctx.register_learner(fixture_multiples().to_bms());
  return ctx;
}

/// Emits `hyps` in order, one per datum, then repeats the last entry forever.
BmsLearner scripted(std::vector<Hypothesis> hyps) {
  return BmsLearner("script", State::of(0), [hyps](const State& s, const Datum&) -> std::optional<Transition> {
    const Nat k = s.term.as_nat();
    const Nat last = hyps.size() - 1;
    return Transition{State::of(std::min<Nat>(k + 1, last)), hyps[std::min<Nat>(k, last)]};
  });
}

Trace run(const BmsLearner& m, std::string_view text, std::size_t budget = 64) {
  return trace(m, Text::parse(text), budget);
}

}  // namespace

TEST_CASE("effective positions skip ?") {
  const auto tr = run(scripted({Hypothesis::none(), base("p4"), Hypothesis::none(), base("p2")}), "0,0,0,0|0");
  const auto eff = effective_positions(tr);
  // The periodic tail repeats p2, but only recorded positions are listed.
  REQUIRE(eff.size() >= 2);
  CHECK(eff[0].time == 1);
  CHECK(eff[0].index == base("p4").index());
  CHECK(eff[1].time == 3);
  CHECK(eff[1].index == base("p2").index());

  CHECK(effective_positions(run(scripted({Hypothesis::none()}), "0|0")).empty());
  const auto full = run(fixture_multiples().to_bms(), "4,2|#");
  CHECK(effective_positions(full).size() == full.records.size());
}

TEST_CASE("restriction examples") {
  const auto ctx = context();
  const auto a = fixture_multiples().to_bms();
  const auto tr = run(a, "4,2|#");
  CHECK(check(Predicate::SMON, tr, ctx).outcome == Outcome::holds);
  CHECK(check(Predicate::WB, tr, ctx).outcome == Outcome::holds);
  CHECK(check(Predicate::T, tr, ctx).outcome == Outcome::holds);

  const auto u = run(fixture_u_shape().to_bms(), "1|#");
  const auto snu = check(Predicate::SNU, u, ctx);
  CHECK(snu.outcome == Outcome::violated);
  REQUIRE(snu.witness);
  CHECK(*snu.witness == Witness{0, 1, 2});
  CHECK(check(Predicate::NU, u, ctx).outcome == Outcome::holds);
  CHECK(check(Predicate::SDEC, u, ctx).outcome == Outcome::violated);
  CHECK(check(Predicate::DEC, u, ctx).outcome == Outcome::holds);

  // A mind change from L2 down to L4 has no witness in the new language.
  const auto shrink = run(scripted({base("p2"), base("p4")}), "0,0|0");
  const auto wb = check(Predicate::WB, shrink, ctx);
  CHECK(wb.outcome == Outcome::violated);
  REQUIRE(wb.witness);
  CHECK(wb.witness->r == 0);
  CHECK(wb.witness->s == 1);
  CHECK(check(Predicate::SMON, shrink, ctx).outcome == Outcome::violated);
}

TEST_CASE("explanatory convergence") {
  const auto ctx = context();
  const auto a = fixture_multiples().to_bms();
  CHECK(check_ex(run(a, "0,2,4,6,8,10,12,14,16|#"), ctx).outcome == Outcome::holds);
  CHECK(check_ex(run(a, "4,2|#"), ctx).outcome == Outcome::violated);
  CHECK(check_ex(run(scripted({Hypothesis::none()}), "0|0"), ctx).outcome == Outcome::violated);
  CHECK(check_ex(run(a, "0,4,8,12,16|#"), ctx).outcome == Outcome::holds);
  // A padded detour is a syntactic change, but the final index settles.
  const auto pads = run(scripted({base("p4"), IndexExpr::padded(base("p4").index(), Term::nat(1)), base("p4")}), "0,4,8,12,16|#");
  CHECK(check_ex(pads, ctx).outcome == Outcome::holds);
  CHECK(check(Predicate::EX, pads, ctx).outcome == Outcome::holds);
  CHECK(check_ex(run(counter_learner(), "|#"), ctx).outcome == Outcome::undetermined);
}

TEST_CASE("finitely many states") {
  CHECK(check_bms_star(run(fixture_multiples().to_bms(), "4,2|#")).outcome == Outcome::holds);
  CHECK(check_bms_star(run(counter_learner(), "|#")).outcome == Outcome::undetermined);
  CHECK(check_bms_star(run(scripted({base("p4")}), "0|0")).outcome == Outcome::holds);
  const IterLearner it("it", [](const Hypothesis&, const Datum&) { return std::optional<Hypothesis>(base("s0")); });
  CHECK_THROWS_AS(check_bms_star(trace(it, Text::parse("0|0"), 8)), TraceKindError);
}

TEST_CASE("predicate tags and reports") {
  CHECK(parse_predicate("bms_star") == Predicate::BMS_STAR);
  CHECK(parse_predicate("Snu") == Predicate::SNU);
  CHECK(parse_predicate("WB") == Predicate::WB);
  CHECK_THROWS_AS(parse_predicate("nope"), std::invalid_argument);
  for (auto p : restriction_predicates()) CHECK(parse_predicate(to_string(p)) == p);
  CHECK(restriction_predicates().size() == 11);
  CHECK(is_semantic(Predicate::MON));
  CHECK_FALSE(is_semantic(Predicate::SNU));

  const auto ctx = context();
  SemanticsCache sem(ctx);
  const auto u = run(fixture_u_shape().to_bms(), "1|#");
  const auto j = verdict_report(check(Predicate::SNU, u, sem), u, sem);
  CHECK(j["predicate"] == "SNU");
  CHECK(j["outcome"] == "VIOLATED");
  CHECK(j["witness"].size() == 3);
  CHECK(j["involved"].size() >= 2);
}

TEST_CASE("implication instances") {
  const auto ctx = context();
  const auto tr = run(fixture_multiples().to_bms(), "4,2|#");
  REQUIRE(check(Predicate::WB, tr, ctx).outcome == Outcome::holds);
  for (auto p : {Predicate::CONV, Predicate::SDEC, Predicate::CAUT}) CHECK(check(p, tr, ctx).outcome == Outcome::holds);

  // {0}, L4, {0} on content {0}: a return to a correct language, so not NU.
  const auto back = run(scripted({base("s0"), base("p4"), base("s0")}), "0,0,0|0");
  REQUIRE(check(Predicate::NU, back, ctx).outcome == Outcome::violated);
  bool some = false;
  for (auto p : {Predicate::DEC, Predicate::WMON, Predicate::SNU}) some = some || check(p, back, ctx).outcome == Outcome::violated;
  CHECK(some);
}

// Random tables: every witness replays, and refutations survive truncation.
TEST_CASE("property: witnesses replay and refutation is prefix-stable") {
  const auto ctx = context();
  SemanticsCache sem(ctx);
  Rng rng(17);
  RandomTableParams params;
  params.none_probability = 0.25;
  params.hypotheses = {"s0", "s1", "s01", "s012", "s12", "p4"};
  std::size_t violations = 0;
  for (int i = 0; i < 80; ++i) {
    const auto m = random_bms_table(rng, params, "R").to_bms();
    const HistoryLearner h("Rh", [m](std::span<const Datum> s) -> std::optional<Hypothesis> {
      const auto r = bms_run(m, s);
      if (diverged(r)) return std::nullopt;
      return std::get<BmsRun>(r).hyp;
    });
    TextGenParams tp;
    tp.count = 4;
    for (const auto& text : gen_texts({0, 1, 2}, tp, 500 + i, 16)) {
      const auto tr = trace(m, text, 48);
      for (auto p : restriction_predicates()) {
        if (p == Predicate::T) continue;
        const auto v = check(p, tr, sem);
        if (v.outcome == Outcome::violated) {
          REQUIRE(v.witness);
          CHECK(replay_witness(p, tr, sem, *v.witness));
          ++violations;
          const auto cut = trace(h, text, std::max(text.head.size() + 1, v.witness->t + 1));
          CHECK(check(p, cut, sem).outcome == Outcome::violated);
        } else if (v.outcome == Outcome::holds) {
          const auto cut = trace(h, text, text.head.size() + 1 + rng.below(20));
          CHECK(check(p, cut, sem).outcome != Outcome::violated);
        }
      }
    }
  }
  CHECK(violations > 0);
}
