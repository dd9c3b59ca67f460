#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "limitlab/core.hpp"
#include "limitlab/hypothesis.hpp"
#include "limitlab/learners.hpp"

namespace limitlab {

enum class LearnerKind { bms, iterative, history };

std::string to_string(LearnerKind k);

/// One step of a learning sequence. Record `time` consumed text position
/// `time` and holds the learner's output on the prefix of length time+1.
struct TraceRecord {
  std::size_t time = 0;
  Datum datum;
  std::optional<State> state_before;  // BMS traces only
  std::optional<State> state_after;
  Hypothesis hyp;
};

/// Records from `start` on repeat with period `period` forever.
struct Cycle {
  std::size_t start = 0;
  std::size_t period = 1;
  friend bool operator==(const Cycle&, const Cycle&) = default;
};

struct Trace {
  LearnerKind kind = LearnerKind::bms;
  std::string learner_id;
  Text text;
  std::size_t budget = 0;
  std::vector<TraceRecord> records;
  std::optional<Cycle> cycle;
  std::optional<std::size_t> divergence;  // text position of the undefined step
  std::optional<State> divergence_state;

  bool budget_exhausted() const { return !cycle && !divergence; }
  /// Whether the records determine the whole infinite learning sequence.
  bool complete() const { return !budget_exhausted(); }

  /// Record for any time; times past the recorded range are folded back into
  /// the cycle. Throws std::out_of_range when the sequence is not determined
  /// there (budget exhausted or past a divergence).
  const TraceRecord& at(std::size_t t) const;
  /// Whether `t` has a defined hypothesis (false past a divergence).
  bool defined_at(std::size_t t) const;

  nlohmann::json to_json() const;
};

/// Wrong learner kind for a trace operation.
class TraceKindError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Simulates through the head and then through tail repetitions until the
/// memory (state or hypothesis) repeats at the same tail offset, the step map
/// is undefined, or `budget` records have been produced.
/// Throws std::invalid_argument when budget < |head| + 1.
Trace trace(const BmsLearner& m, const Text& text, std::size_t budget);
Trace trace(const IterLearner& m, const Text& text, std::size_t budget);
/// No memory to compare, so this always runs to the budget (or divergence).
Trace trace(const HistoryLearner& m, const Text& text, std::size_t budget);

enum class StateVerdict { finite, undetermined };

struct VisitedStates {
  std::set<State> states;
  StateVerdict verdict = StateVerdict::undetermined;
};

/// States s*(T[t]) seen by a BMS trace. Throws TraceKindError otherwise.
VisitedStates visited_states(const Trace& tr);

}  // namespace limitlab
