#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "limitlab/hypspace.hpp"
#include "limitlab/learners.hpp"
#include "limitlab/trace.hpp"

namespace limitlab {

/// How a replay path is cut out of a visit log. `exclusive` starts after the
/// entry of the target state, so replaying it from that state walks the
/// logged transitions to the last state. `inclusive` also keeps the datum
/// that first entered the target state (the literal reading); it is kept for
/// comparison and generally does not end in the last state.
enum class PathMode { exclusive, inclusive };

class MissingState : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct VisitEntry {
  State state;
  Datum datum;
  friend bool operator==(const VisitEntry&, const VisitEntry&) = default;
};

/// States in order of first visit, each with the datum that led there.
/// Starts with the sentinel (start, #).
class VisitLog {
 public:
  explicit VisitLog(State start);

  const std::vector<VisitEntry>& entries() const { return entries_; }
  bool contains(const State& s) const;
  const State& last_state() const { return entries_.back().state; }
  /// Throws std::invalid_argument if `s` is already present.
  VisitLog extended(State s, Datum x) const;

  Term to_term() const;
  static VisitLog from_term(const Term& t);

  /// Every entry k > 0 is reached from entry k-1 on its datum under `m`.
  bool consistent_with(const BmsLearner& m) const;

  friend bool operator==(const VisitLog&, const VisitLog&) = default;

 private:
  VisitLog() = default;
  std::vector<VisitEntry> entries_;
};

/// Data to feed from `from` to walk back to the last logged state.
FinSeq path_replay(const VisitLog& v, const State& from, PathMode mode = PathMode::exclusive);

struct PumpStep {
  FinSeq pump;
  VisitLog visit;
};

/// One step of the equivalent-text construction: `x` alone if it leads to a
/// fresh state (which is logged), otherwise `x` followed by the replay path
/// back to the last logged state.
Partial<PumpStep> pump_step(const BmsLearner& m, const VisitLog& v, const Datum& x,
                            PathMode mode = PathMode::exclusive);

// ---------------------------------------------------------------------------
// Iterative <-> BMS

/// Hypotheses as states: `?` is the start state 0, hypothesis h is (h h).
State hypothesis_state(const Hypothesis& h);
Hypothesis state_hypothesis(const State& s);

BmsLearner it_to_bms(const IterLearner& m);

/// Iterative learner conjecturing M's output on the pumped sequence, padded
/// with the visit log; its next conjecture is computed from the previous
/// conjecture's payload and the datum alone.
IterLearner bms_to_it(const BmsLearner& m, PathMode mode = PathMode::exclusive);

/// Visit log carried by a conjecture of `bms_to_it` (start log for plain ?).
std::optional<VisitLog> decode_visit(const Hypothesis& h, const State& start);

struct EquivalentText {
  FinSeq prefix;                  // pumped sequence for the first `horizon` data
  std::vector<std::size_t> sim;   // sim[t] = |pumped prefix for T[t]|, t = 0..horizon
  std::optional<Divergence> divergence;  // position in the original text
};

/// Pumped prefix and simulating map. Throws std::invalid_argument on horizon 0.
EquivalentText equivalent_text(const BmsLearner& m, const Text& text, std::size_t horizon,
                               PathMode mode = PathMode::exclusive);

/// The whole pumped text as an eventually periodic text, available once the
/// visit log stops growing over a full tail pass. nullopt if that does not
/// happen within `max_passes` passes or the learner diverges.
std::optional<Text> equivalent_text_periodic(const BmsLearner& m, const Text& text, std::size_t max_passes,
                                             PathMode mode = PathMode::exclusive);

// ---------------------------------------------------------------------------
// State decisiveness

/// Learner over (s, visit-log) states that never re-enters a state it left:
/// a transition into an already logged state keeps the composite state and
/// conjectures what M says after replaying back to the last logged state.
BmsLearner state_decisive(const BmsLearner& m, PathMode mode = PathMode::exclusive);

/// Times a BMS trace enters a state it had previously left (including the
/// wrap-around of its cycle).
std::size_t withdrawn_state_reentries(const Trace& tr);

// ---------------------------------------------------------------------------
// Strongly conservative and witness-based learners

/// M'(σ) = Guarded(M, M(σ), s*_M(σ)); `?` on empty input or when M says ?.
/// Guarded indices name M by id, so M must be registered wherever their
/// semantics is evaluated.
HistoryLearner strongly_conservative(const BmsLearner& m);

/// The same learner through its factorisation: M's states, conjecture
/// Guarded(M, h_M(s,x), s_M(s,x)).
BmsLearner strongly_conservative_bms(const BmsLearner& m);

struct ConservativenessViolation {
  std::size_t text_index;
  std::size_t position;  // datum T(position) broke the rule
};

/// Checks M'(σ⌢x) ≠ M'(σ) ⇒ x ∉ W_{M'(σ)} on every prefix σ of length below
/// `horizon` of every text.
std::vector<ConservativenessViolation> audit_local_conservativeness(const HistoryLearner& m,
                                                                    std::span<const Text> texts,
                                                                    std::size_t horizon, const EvalContext& ctx);

/// Learner over (s, mind-change-log) states. Data that already caused a mind
/// change are read as `#`; a new conjecture of M' is emitted as
/// Union(logged data, conjecture) and repetitions as `?`.
BmsLearner witness_based(const BmsLearner& m);
/// Through the factorisation recorded on the history learner.
/// Throws std::invalid_argument if it has none.
BmsLearner witness_based(const HistoryLearner& m_prime);

/// Heuristic diagnostic: shortest σ over L ∪ {#} (|σ| <= max_len) with
/// W_{M(σ)} = L such that no extension over L ∪ {#} of length <= ext_len makes
/// M conjecture something else (or diverge).
std::optional<FinSeq> find_locking_sequence(const BmsLearner& m, const NatSet& language, std::size_t max_len,
                                            std::size_t ext_len, const EvalContext& ctx);

}  // namespace limitlab
