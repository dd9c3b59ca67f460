#pragma once

#include <compare>
#include <optional>
#include <string>

#include "limitlab/core.hpp"
#include "limitlab/term.hpp"

namespace limitlab {

/// Learner memory state. Plain tables use numbers; derived learners use
/// composite terms such as `(s visit-log)`.
struct State {
  Term term;

  State() : term(Term::nat(0)) {}
  explicit State(Term t) : term(std::move(t)) {}
  static State of(Nat n) { return State(Term::nat(n)); }

  std::string to_string() const { return term.to_string(); }
  friend auto operator<=>(const State&, const State&) = default;
  friend bool operator==(const State&, const State&) = default;
};

/// Name of a language in the hypothesis space.
///
/// Four kinds:
///   Base(id)               catalog entry
///   Padded(inner, payload) same language as `inner`, syntactically distinct
///   Guarded(M, e, s)       the part of W_e enumerated while M stays put in s
///                          answering e
///   Union(extra, e)        extra ∪ W_e
///
/// Identity is structural; see `semantics` in hypspace.hpp for the meaning.
class IndexExpr {
 public:
  enum class Kind { base, padded, guarded, union_of };

  static IndexExpr base(std::string id);
  static IndexExpr padded(const IndexExpr& inner, Term payload);
  static IndexExpr guarded(std::string learner_id, const IndexExpr& e, const State& s);
  static IndexExpr union_of(const NatSet& extra, const IndexExpr& e);

  /// Validates shape; throws std::invalid_argument on malformed terms.
  static IndexExpr from_term(const Term& t);
  const Term& term() const { return term_; }

  Kind kind() const { return kind_; }
  const std::string& base_id() const;
  IndexExpr inner() const;  // padded, guarded, union_of
  const Term& payload() const;
  const std::string& learner_id() const;
  State guard_state() const;
  NatSet extra() const;

  std::size_t depth() const;
  std::string to_string() const { return term_.to_string(); }

  nlohmann::json to_json() const;
  static IndexExpr from_json(const nlohmann::json& j);

  friend auto operator<=>(const IndexExpr& a, const IndexExpr& b) { return a.term_ <=> b.term_; }
  friend bool operator==(const IndexExpr& a, const IndexExpr& b) { return a.term_ == b.term_; }

 private:
  IndexExpr(Term t, Kind k) : term_(std::move(t)), kind_(k) {}
  Term term_;
  Kind kind_;
};

/// Output symbol: an index, or `?`. A `?` may carry a padding payload so that
/// an iterative learner can keep memory while not conjecturing; it is still
/// "no hypothesis" for every success criterion.
class Hypothesis {
 public:
  Hypothesis() : term_(Term::sym("?")) {}
  static Hypothesis none() { return Hypothesis(); }
  static Hypothesis none_with(Term payload);
  Hypothesis(const IndexExpr& e) : term_(e.term()) {}  // NOLINT(google-explicit-constructor)

  bool is_none() const;
  IndexExpr index() const;  // throws std::logic_error on ?
  std::optional<Term> none_payload() const;

  const Term& term() const { return term_; }
  static Hypothesis from_term(const Term& t);

  std::string to_string() const;
  nlohmann::json to_json() const;
  static Hypothesis from_json(const nlohmann::json& j);

  friend auto operator<=>(const Hypothesis& a, const Hypothesis& b) { return a.term_ <=> b.term_; }
  friend bool operator==(const Hypothesis& a, const Hypothesis& b) { return a.term_ == b.term_; }

 private:
  explicit Hypothesis(Term t) : term_(std::move(t)) {}
  Term term_;
};

/// Padded(p, payload) for an index, a payload-carrying `?` otherwise.
/// Injective in (p, payload).
Hypothesis pad(const Hypothesis& p, Term payload);
IndexExpr pad(const IndexExpr& p, Term payload);

/// Canonical payload for a finite set: sorted, deduplicated list of numbers.
Term canonical_set(const NatSet& set);

}  // namespace limitlab
