#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "limitlab/core.hpp"
#include "limitlab/hypothesis.hpp"
#include "limitlab/learners.hpp"

namespace limitlab {

/// A finite language with an enumeration schedule: element x shows up in the
/// stage-t approximation once x <= t and delay(x) <= t.
struct Language {
  NatSet elements;
  std::map<Nat, Nat> delay;  // missing entries mean 0

  Nat delay_of(Nat x) const;
};

struct Catalog {
  Nat universe_max = 16;
  std::map<std::string, Language> entries;

  /// Throws std::invalid_argument when an element exceeds universe_max, a
  /// delay names a non-element, or an id repeats (JSON input).
  void validate() const;
  Nat max_delay() const;

  nlohmann::json to_json() const;
  static Catalog from_json(const nlohmann::json& j);
};

/// Unknown base id or learner id.
class UnresolvedReference : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Catalog + learner registry (for guarded indices) + stabilisation stage.
class EvalContext {
 public:
  explicit EvalContext(Catalog catalog);
  EvalContext(Catalog catalog, Nat stabilization_stage);

  const Catalog& catalog() const { return *catalog_; }
  Nat stabilization_stage() const { return t_stab_; }
  Nat universe_max() const { return catalog_->universe_max; }

  /// Replaces any learner registered under the same id.
  void register_learner(const BmsLearner& m);
  bool has_learner(const std::string& id) const { return learners_.contains(id); }
  const BmsLearner& learner(const std::string& id) const;

 private:
  std::shared_ptr<const Catalog> catalog_;
  std::map<std::string, BmsLearner> learners_;
  Nat t_stab_;
};

/// Stage-t approximation of the language named by `p`.
NatSet enumerate_step(const EvalContext& ctx, const IndexExpr& p, Nat t);

/// True iff, for every x enumerated into W_e by stage t, the learner stays in
/// `s` and answers `e`. Divergence counts as failure.
bool guard_holds(const EvalContext& ctx, const IndexExpr& guarded, Nat t);

/// The stabilised language named by `p`.
NatSet semantics(const EvalContext& ctx, const IndexExpr& p);

bool semantically_equal(const EvalContext& ctx, const IndexExpr& p, const IndexExpr& q);

/// Memoising front end for repeated semantic queries over one context.
class SemanticsCache {
 public:
  explicit SemanticsCache(const EvalContext& ctx) : ctx_(&ctx) {}

  const NatSet& operator()(const IndexExpr& p);
  const EvalContext& context() const { return *ctx_; }

 private:
  const EvalContext* ctx_;
  std::map<Term, NatSet> memo_;
};

}  // namespace limitlab
