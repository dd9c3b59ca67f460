#include "limitlab/hypothesis.hpp"

#include <algorithm>
#include <stdexcept>

namespace limitlab {

namespace {

const Term& item(const Term& t, std::size_t i) { return t.as_list().at(i); }

[[noreturn]] void malformed(const Term& t) {
  throw std::invalid_argument("malformed index expression: " + t.to_string());
}

}  // namespace

IndexExpr IndexExpr::base(std::string id) {
  if (id.empty() || id == "?" || id == "#") throw std::invalid_argument("invalid base id '" + id + "'");
  return {Term::list({Term::sym("base"), Term::sym(std::move(id))}), Kind::base};
}

IndexExpr IndexExpr::padded(const IndexExpr& inner, Term payload) {
  return {Term::list({Term::sym("pad"), inner.term_, std::move(payload)}), Kind::padded};
}

IndexExpr IndexExpr::guarded(std::string learner_id, const IndexExpr& e, const State& s) {
  return {Term::list({Term::sym("guard"), Term::sym(std::move(learner_id)), e.term_, s.term}),
          Kind::guarded};
}

IndexExpr IndexExpr::union_of(const NatSet& extra, const IndexExpr& e) {
  return {Term::list({Term::sym("union"), canonical_set(extra), e.term_}), Kind::union_of};
}

IndexExpr IndexExpr::from_term(const Term& t) {
  if (!t.is_list() || t.as_list().empty() || !t.as_list()[0].is_sym()) malformed(t);
  const auto& xs = t.as_list();
  const auto& tag = xs[0].as_sym();
  if (tag == "base" && xs.size() == 2 && xs[1].is_sym()) return base(xs[1].as_sym());
  if (tag == "pad" && xs.size() == 3) return padded(from_term(xs[1]), xs[2]);
  if (tag == "guard" && xs.size() == 4 && xs[1].is_sym()) {
    return guarded(xs[1].as_sym(), from_term(xs[2]), State(xs[3]));
  }
  if (tag == "union" && xs.size() == 3 && xs[1].is_list()) {
    NatSet extra;
    for (const auto& x : xs[1].as_list()) {
      if (!x.is_nat()) malformed(t);
      extra.insert(x.as_nat());
    }
    return union_of(extra, from_term(xs[2]));
  }
  malformed(t);
}

const std::string& IndexExpr::base_id() const {
  if (kind_ != Kind::base) throw std::logic_error("not a base index: " + to_string());
  return item(term_, 1).as_sym();
}

IndexExpr IndexExpr::inner() const {
  switch (kind_) {
    case Kind::padded:
      return from_term(item(term_, 1));
    case Kind::union_of:
    case Kind::guarded:
      return from_term(item(term_, 2));
    case Kind::base:
      break;
  }
  throw std::logic_error("base index has no inner index");
}

const Term& IndexExpr::payload() const {
  if (kind_ != Kind::padded) throw std::logic_error("not a padded index: " + to_string());
  return item(term_, 2);
}

const std::string& IndexExpr::learner_id() const {
  if (kind_ != Kind::guarded) throw std::logic_error("not a guarded index: " + to_string());
  return item(term_, 1).as_sym();
}

State IndexExpr::guard_state() const {
  if (kind_ != Kind::guarded) throw std::logic_error("not a guarded index: " + to_string());
  return State(item(term_, 3));
}

NatSet IndexExpr::extra() const {
  if (kind_ != Kind::union_of) throw std::logic_error("not a union index: " + to_string());
  NatSet out;
  for (const auto& x : item(term_, 1).as_list()) out.insert(x.as_nat());
  return out;
}

std::size_t IndexExpr::depth() const {
  return kind_ == Kind::base ? 1 : 1 + inner().depth();
}

nlohmann::json IndexExpr::to_json() const {
  switch (kind_) {
    case Kind::base:
      return base_id();
    case Kind::padded:
      return {{"pad", inner().to_json()}, {"payload", payload().to_json()}};
    case Kind::guarded:
      return {{"guard", inner().to_json()},
              {"learner", learner_id()},
              {"state", guard_state().term.to_json()}};
    case Kind::union_of: {
      const auto xs = extra();
      return {{"union", std::vector<Nat>(xs.begin(), xs.end())}, {"index", inner().to_json()}};
    }
  }
  return nullptr;
}

IndexExpr IndexExpr::from_json(const nlohmann::json& j) {
  if (j.is_string()) return base(j.get<std::string>());
  if (j.is_object()) {
    if (j.contains("pad")) return padded(from_json(j.at("pad")), Term::from_json(j.at("payload")));
    if (j.contains("guard")) {
      return guarded(j.at("learner").get<std::string>(), from_json(j.at("guard")),
                     State(Term::from_json(j.at("state"))));
    }
    if (j.contains("union")) {
      const auto xs = j.at("union").get<std::vector<Nat>>();
      return union_of(NatSet(xs.begin(), xs.end()), from_json(j.at("index")));
    }
  }
  throw std::invalid_argument("cannot read index expression from JSON " + j.dump());
}

Hypothesis Hypothesis::none_with(Term payload) {
  return Hypothesis(Term::list({Term::sym("?"), std::move(payload)}));
}

bool Hypothesis::is_none() const {
  if (term_.is_sym("?")) return true;
  const auto& xs = term_.as_list();
  return xs.size() == 2 && xs[0].is_sym("?");
}

IndexExpr Hypothesis::index() const {
  if (is_none()) throw std::logic_error("? is not an index");
  return IndexExpr::from_term(term_);
}

std::optional<Term> Hypothesis::none_payload() const {
  if (term_.is_list() && is_none()) return term_.as_list()[1];
  return std::nullopt;
}

Hypothesis Hypothesis::from_term(const Term& t) {
  if (t.is_sym("?")) return none();
  if (t.is_list() && t.as_list().size() == 2 && t.as_list()[0].is_sym("?")) {
    return none_with(t.as_list()[1]);
  }
  return IndexExpr::from_term(t);
}

std::string Hypothesis::to_string() const { return term_.to_string(); }

nlohmann::json Hypothesis::to_json() const {
  if (auto p = none_payload()) return {{"pad", "?"}, {"payload", p->to_json()}};
  if (is_none()) return "?";
  return index().to_json();
}

Hypothesis Hypothesis::from_json(const nlohmann::json& j) {
  if (j.is_string() && j.get<std::string>() == "?") return none();
  if (j.is_object() && j.contains("pad") && j.at("pad").is_string() &&
      j.at("pad").get<std::string>() == "?") {
    return none_with(Term::from_json(j.at("payload")));
  }
  return IndexExpr::from_json(j);
}

Hypothesis pad(const Hypothesis& p, Term payload) {
  if (auto old = p.none_payload()) return Hypothesis::none_with(Term::list({*old, std::move(payload)}));
  if (p.is_none()) return Hypothesis::none_with(std::move(payload));
  return IndexExpr::padded(p.index(), std::move(payload));
}

IndexExpr pad(const IndexExpr& p, Term payload) { return IndexExpr::padded(p, std::move(payload)); }

Term canonical_set(const NatSet& set) {
  Term::List xs;
  xs.reserve(set.size());
  for (auto x : set) xs.push_back(Term::nat(x));
  return Term::list(std::move(xs));
}

}  // namespace limitlab
