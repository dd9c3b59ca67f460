#include <doctest.h>

#include "limitlab/fixtures.hpp"
#include "limitlab/learners.hpp"
#include "limitlab/transforms.hpp"

using namespace limitlab;

namespace {

FinSeq seq(std::string_view s) { return parse_seq(s); }
Hypothesis base(const std::string& id) { return IndexExpr::base(id); }

/// The multiples fixture written as an iterative learner.
IterLearner iterative_multiples() {
  return IterLearner("A_it", [](const Hypothesis& prev, const Datum& x) -> std::optional<Hypothesis> {
    if (x.is_number() && x.value() % 2 == 1) return std::nullopt;
    if (prev == base("p2")) return base("p2");
    if (x.is_pause() || x.value() % 4 == 0) return base("p4");
    return base("p2");
  });
}

}  // namespace

TEST_CASE("bms_run folds the step map") {
  const auto a = fixture_multiples().to_bms();
  auto r = bms_run(a, State::of(0), {});
  REQUIRE_FALSE(diverged(r));
  CHECK(std::get<BmsRun>(r).state == State::of(0));
  CHECK(std::get<BmsRun>(r).hyp.is_none());

  r = bms_run(a, seq("4,8"));
  CHECK(std::get<BmsRun>(r).state == State::of(0));
  CHECK(std::get<BmsRun>(r).hyp == base("p4"));

  r = bms_run(a, seq("4,2"));
  CHECK(std::get<BmsRun>(r).state == State::of(1));
  CHECK(std::get<BmsRun>(r).hyp == base("p2"));

  r = bms_run(a, seq("4,3,2"));
  REQUIRE(diverged(r));
  CHECK(std::get<Divergence>(r).position == 1);

  r = bms_run(a, State::of(1), seq("4"));
  CHECK(std::get<BmsRun>(r).hyp == base("p2"));
}

TEST_CASE("iter_run folds from ?") {
  const auto m = iterative_multiples();
  CHECK(std::get<Hypothesis>(iter_run(m, {})).is_none());
  CHECK(std::get<Hypothesis>(iter_run(m, seq("4"))) == base("p4"));
  CHECK(std::get<Hypothesis>(iter_run(m, seq("4,2,4"))) == base("p2"));
  const auto r = iter_run(m, seq("7"));
  REQUIRE(diverged(r));
  CHECK(std::get<Divergence>(r).position == 0);

  // Round trip through the BMS form agrees with the source.
  const auto n = it_to_bms(m);
  CHECK(std::get<BmsRun>(bms_run(n, seq("4"))).hyp == base("p4"));
}

TEST_CASE("transition tables from JSON") {
  const auto j = nlohmann::json::parse(R"({
    "id": "T", "kind": "bms", "start": 0,
    "transitions": [
      {"state": 0, "datum": 1, "next": 1, "hyp": "s1"},
      {"state": 0, "datum": "*", "next": 0, "hyp": "?"},
      {"state": 1, "datum": "#", "next": 1, "hyp": {"pad": "s1", "payload": [1, 2]}}
    ]})");
  const auto t = TransitionTable::from_json(j);
  CHECK(t.id == "T");
  CHECK(t.state_count() == 2);
  CHECK(t.data() == NatSet{1});
  const auto m = t.to_bms();
  CHECK(m.step(State::of(0), Datum::number(1))->hyp == base("s1"));
  CHECK(m.step(State::of(0), Datum::number(9))->hyp.is_none());  // wildcard
  CHECK(m.step(State::of(0), Datum::pause())->next == State::of(0));
  CHECK_FALSE(m.step(State::of(1), Datum::number(1)));  // no row, no wildcard
  CHECK(m.step(State::of(1), Datum::pause())->hyp.index().kind() == IndexExpr::Kind::padded);

  const auto back = TransitionTable::from_json(t.to_json());
  CHECK(back.rows.size() == t.rows.size());
  CHECK(back.to_json() == t.to_json());

  const auto bare = TransitionTable::from_json(nlohmann::json::parse(R"([{"state": 0, "datum": 0, "next": 0, "hyp": "s0"}])"));
  CHECK(bare.rows.size() == 1);
  CHECK_FALSE(bare.iterative);
}

TEST_CASE("iterative tables key on the previous hypothesis") {
  const auto t = TransitionTable::from_json(nlohmann::json::parse(R"({
    "kind": "iterative",
    "transitions": [
      {"state": "?", "datum": 0, "hyp": "s0"},
      {"state": "s0", "datum": "*", "hyp": "s01"}
    ]})"));
  const auto m = t.to_iter();
  CHECK(std::get<Hypothesis>(iter_run(m, seq("0,1"))) == base("s01"));
  CHECK(diverged(iter_run(m, seq("0,1,#"))));  // no row for s01
  CHECK(diverged(iter_run(m, seq("1"))));
  CHECK_THROWS_AS(t.to_bms(), std::logic_error);
}

TEST_CASE("malformed tables are rejected") {
  CHECK_THROWS_AS(TransitionTable::from_json(nlohmann::json::parse(R"([
      {"state": 0, "datum": 1, "next": 1, "hyp": "s1"},
      {"state": 0, "datum": 1, "next": 0, "hyp": "s0"}])")),
                  std::invalid_argument);
  CHECK_THROWS_AS(TransitionTable::from_json(nlohmann::json::parse(R"({"kind": "weird", "transitions": []})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(TransitionTable::from_json(nlohmann::json::parse(R"([{"state": 0, "datum": "x", "next": 0, "hyp": "s0"}])")),
                  std::invalid_argument);
  CHECK_THROWS_AS(TransitionTable::from_json(nlohmann::json::parse(R"([{"state": 0, "datum": 1, "hyp": "s0"}])")),
                  std::invalid_argument);
  CHECK_THROWS_AS(TransitionTable::from_json(nlohmann::json::parse(R"({"transitions": 3})")), std::invalid_argument);
}

TEST_CASE("materialize explores reachable states") {
  const auto a = fixture_multiples().to_bms();
  const auto mat = materialize(a, {0, 2, 4}, 16);
  CHECK_FALSE(mat.truncated);
  CHECK(mat.table.rows.size() == 8);  // 2 states x 4 symbols
  CHECK(reachable_state_count(a, {0, 2, 4}, 100) == 2);
  CHECK(reachable_state_count(a, {0, 4}, 100) == 1);

  const auto b = counter_learner();
  const auto capped = materialize(b, {0}, 5);
  CHECK(capped.truncated);
  CHECK(reachable_state_count(b, {0}, 50) == 50);

  // A materialised table behaves like the learner on the explored alphabet.
  const auto again = mat.table.to_bms();
  for (const auto& s : {seq("4,2,#"), seq("0,4,#,4"), seq("2")}) {
    CHECK(std::get<BmsRun>(bms_run(again, s)).hyp == std::get<BmsRun>(bms_run(a, s)).hyp);
  }
}

TEST_CASE("history learners carry their factorisation") {
  const auto a = fixture_multiples().to_bms();
  const HistoryLearner h("len", [](std::span<const Datum> s) -> std::optional<Hypothesis> {
    if (s.size() > 3) return std::nullopt;
    return s.empty() ? Hypothesis::none() : base("p4");
  });
  CHECK_FALSE(h.factors_through());
  CHECK(h(seq("1,2"))->index() == IndexExpr::base("p4"));
  CHECK_FALSE(h(seq("1,2,3,4")));
  const HistoryLearner g("g", [](std::span<const Datum>) { return std::optional<Hypothesis>(Hypothesis::none()); }, a);
  CHECK(g.factors_through()->id() == "A");
}
