#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "limitlab/core.hpp"
#include "limitlab/hypothesis.hpp"

namespace limitlab {

/// Undefined step at `position` (0-based index into the input sequence).
struct Divergence {
  std::size_t position = 0;
  friend bool operator==(const Divergence&, const Divergence&) = default;
};

template <class T>
using Partial = std::variant<T, Divergence>;

template <class T>
bool diverged(const Partial<T>& r) {
  return std::holds_alternative<Divergence>(r);
}

struct Transition {
  State next;
  Hypothesis hyp;
  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Bounded-memory-states learner: one partial map producing next state and
/// hypothesis together, so both components share a domain.
class BmsLearner {
 public:
  using StepFn = std::function<std::optional<Transition>(const State&, const Datum&)>;

  BmsLearner(std::string id, State start, StepFn step);

  const std::string& id() const { return id_; }
  const State& start() const { return start_; }
  std::optional<Transition> step(const State& s, const Datum& x) const { return (*step_)(s, x); }

 private:
  std::string id_;
  State start_;
  std::shared_ptr<const StepFn> step_;
};

/// Iterative learner: the previous conjecture is the only memory.
class IterLearner {
 public:
  using StepFn = std::function<std::optional<Hypothesis>(const Hypothesis&, const Datum&)>;

  IterLearner(std::string id, StepFn step);

  const std::string& id() const { return id_; }
  std::optional<Hypothesis> step(const Hypothesis& h, const Datum& x) const { return (*step_)(h, x); }

 private:
  std::string id_;
  std::shared_ptr<const StepFn> step_;
};

/// Unrestricted learner on whole input histories. Only horizon-bounded
/// analyses apply; there is no memory to detect cycles on.
class HistoryLearner {
 public:
  using Fn = std::function<std::optional<Hypothesis>(std::span<const Datum>)>;

  HistoryLearner(std::string id, Fn fn, std::optional<BmsLearner> factors_through = std::nullopt);

  const std::string& id() const { return id_; }
  std::optional<Hypothesis> operator()(std::span<const Datum> seq) const { return (*fn_)(seq); }

  /// Set when the learner's value on σ only depends on (M(σ), s*_M(σ)) for
  /// this BMS learner M.
  const std::optional<BmsLearner>& factors_through() const { return source_; }

 private:
  std::string id_;
  std::shared_ptr<const Fn> fn_;
  std::optional<BmsLearner> source_;
};

struct BmsRun {
  State state;
  Hypothesis hyp;
};

/// Folds the step map over `seq` starting in `from`. Empty input yields
/// (from, ?).
Partial<BmsRun> bms_run(const BmsLearner& m, const State& from, std::span<const Datum> seq);
Partial<BmsRun> bms_run(const BmsLearner& m, std::span<const Datum> seq);

/// Folds from `?`; empty input yields `?`.
Partial<Hypothesis> iter_run(const IterLearner& m, std::span<const Datum> seq);

// ---------------------------------------------------------------------------
// Finite tables

/// Row key datum; `wildcard` matches any datum without an exact row.
struct TableDatum {
  std::optional<Datum> datum;  // nullopt: wildcard
  static TableDatum wildcard() { return {}; }
  friend auto operator<=>(const TableDatum&, const TableDatum&) = default;
};

/// Explicit finite step table for a BMS learner (or, with `iterative` set, for
/// an iterative learner whose "state" column is the previous hypothesis).
struct TransitionTable {
  struct Row {
    Term from;  // state, or previous hypothesis term when iterative
    TableDatum datum;
    Term next;  // ignored when iterative
    Hypothesis hyp;
  };

  std::string id = "anonymous";
  bool iterative = false;
  Term start = Term::nat(0);
  std::vector<Row> rows;
  nlohmann::json provenance;  // free-form, null when absent

  /// Throws std::invalid_argument on two rows with the same key.
  BmsLearner to_bms() const;
  IterLearner to_iter() const;

  /// Number of distinct states mentioned (from/next columns).
  std::size_t state_count() const;
  /// Numbers appearing as explicit row data.
  NatSet data() const;

  nlohmann::json to_json() const;
  /// Accepts a bare array of rows or an object with id/kind/start/transitions.
  static TransitionTable from_json(const nlohmann::json& j);
};

/// Explores the states reachable from the start over `alphabet ∪ {#}` and
/// writes every defined step as a row. Stops adding states at `max_states`;
/// `truncated` reports whether that happened.
struct Materialized {
  TransitionTable table;
  bool truncated = false;
};
Materialized materialize(const BmsLearner& m, const NatSet& alphabet, std::size_t max_states);
Materialized materialize(const IterLearner& m, const NatSet& alphabet, std::size_t max_states);

/// Number of states reachable from the start over `alphabet ∪ {#}`, capped.
std::size_t reachable_state_count(const BmsLearner& m, const NatSet& alphabet, std::size_t cap);

}  // namespace limitlab
