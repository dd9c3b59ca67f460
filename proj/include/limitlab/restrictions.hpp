#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "limitlab/hypspace.hpp"
#include "limitlab/trace.hpp"

namespace limitlab {

enum class Predicate { T, EX, BMS_STAR, CONV, DEC, CAUT, WMON, MON, SMON, NU, SNU, SDEC, WB };

std::string to_string(Predicate p);
/// Case-insensitive tag ("SNU", "bms_star", ...). Throws std::invalid_argument.
Predicate parse_predicate(std::string_view tag);

/// The ten admissible restrictions plus T.
const std::vector<Predicate>& restriction_predicates();
/// Restrictions that only look at the languages of conjectures.
bool is_semantic(Predicate p);

enum class Outcome { holds, violated, undetermined };
std::string to_string(Outcome o);

/// Trace times of a violating formula instance. Two-index predicates report
/// (s, s, t).
struct Witness {
  std::size_t r = 0, s = 0, t = 0;
  friend bool operator==(const Witness&, const Witness&) = default;
};

struct Verdict {
  Predicate predicate = Predicate::T;
  Outcome outcome = Outcome::holds;
  std::optional<Witness> witness;
  std::string note;
};

struct EffectivePosition {
  std::size_t time;
  IndexExpr index;
};

/// Positions carrying an actual conjecture (not `?`), in order.
std::vector<EffectivePosition> effective_positions(const Trace& tr);

/// Evaluates one predicate on a trace.
///
/// Quantifiers range over effective positions only. For a trace that ends in
/// a cycle the infinite tail is covered by a finite window: past
/// max(cycle start, |head|+|tail|) both conjecture and seen content are
/// periodic, and three periods suffice for every ordered triple. A trace cut
/// by its budget yields VIOLATED if the recorded prefix already refutes the
/// predicate and UNDETERMINED otherwise.
///
/// Witness choice: the lexicographically least (t, s, r); for DEC, NU, SNU and
/// SDEC the least triple with r < s < t is preferred when one exists.
Verdict check(Predicate pred, const Trace& tr, const EvalContext& ctx);
Verdict check(Predicate pred, const Trace& tr, SemanticsCache& sem);

/// Explanatory convergence: some correct conjecture after which every
/// non-`?` conjecture is syntactically the same.
Verdict check_ex(const Trace& tr, const EvalContext& ctx);
Verdict check_ex(const Trace& tr, SemanticsCache& sem);

/// Finitely many memory states. Throws TraceKindError on non-BMS traces.
Verdict check_bms_star(const Trace& tr);

/// Re-evaluates the formula instance named by `w` straight from the trace.
/// True iff that instance is violated.
bool replay_witness(Predicate pred, const Trace& tr, SemanticsCache& sem, const Witness& w);

struct Implication {
  Predicate antecedent;
  std::vector<Predicate> consequents;
};

/// CONV⇒SNU∧WMON, SDEC⇒DEC∧SNU, SMON⇒CAUT∧DEC∧MON∧WMON, DEC⇒NU, WMON⇒NU,
/// SNU⇒NU, WB⇒CONV∧SDEC∧CAUT.
const std::vector<Implication>& backbone_implications();

struct AuditFinding {
  std::size_t trace_index;
  Predicate antecedent;
  Predicate consequent;
  Verdict consequent_verdict;
};

struct AuditReport {
  std::size_t traces = 0;
  std::size_t instances_checked = 0;  // antecedent HOLDS, consequent decided
  std::size_t undetermined_skipped = 0;
  std::vector<AuditFinding> violations;  // each one is a checker bug

  nlohmann::json to_json() const;
};

AuditReport implication_audit(std::span<const Trace> traces, const EvalContext& ctx);

/// Predicate tag, outcome, witness and the involved conjectures with their
/// languages.
nlohmann::json verdict_report(const Verdict& v, const Trace& tr, SemanticsCache& sem);

}  // namespace limitlab
