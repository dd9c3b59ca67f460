#include "limitlab/hypspace.hpp"

#include <algorithm>

namespace limitlab {

Nat Language::delay_of(Nat x) const {
  auto it = delay.find(x);
  return it == delay.end() ? 0 : it->second;
}

void Catalog::validate() const {
  for (const auto& [id, lang] : entries) {
    for (auto x : lang.elements) {
      if (x > universe_max) {
        throw std::invalid_argument("language '" + id + "': element " + std::to_string(x) +
                                    " exceeds universe bound " + std::to_string(universe_max));
      }
    }
    for (const auto& [x, d] : lang.delay) {
      if (!lang.elements.contains(x)) {
        throw std::invalid_argument("language '" + id + "': delay given for non-element " + std::to_string(x));
      }
    }
  }
}

Nat Catalog::max_delay() const {
  Nat out = 0;
  for (const auto& [id, lang] : entries) {
    for (const auto& [x, d] : lang.delay) out = std::max(out, d);
  }
  return out;
}

nlohmann::json Catalog::to_json() const {
  auto langs = nlohmann::json::array();
  for (const auto& [id, lang] : entries) {
    nlohmann::json l{{"id", id}, {"elements", std::vector<Nat>(lang.elements.begin(), lang.elements.end())}};
    if (!lang.delay.empty()) {
      nlohmann::json d = nlohmann::json::object();
      for (const auto& [x, t] : lang.delay) d[std::to_string(x)] = t;
      l["delay"] = std::move(d);
    }
    langs.push_back(std::move(l));
  }
  return {{"universe_max", universe_max}, {"languages", std::move(langs)}};
}

Catalog Catalog::from_json(const nlohmann::json& j) {
  Catalog c;
  c.universe_max = j.value("universe_max", Nat{16});
  for (const auto& l : j.at("languages")) {
    const auto id = l.at("id").get<std::string>();
    Language lang;
    for (auto x : l.at("elements").get<std::vector<Nat>>()) lang.elements.insert(x);
    if (l.contains("delay")) {
      for (const auto& [key, value] : l.at("delay").items()) {
        lang.delay[static_cast<Nat>(std::stoull(key))] = value.get<Nat>();
      }
    }
    if (!c.entries.emplace(id, std::move(lang)).second) {
      throw std::invalid_argument("duplicate language id '" + id + "'");
    }
  }
  c.validate();
  return c;
}

EvalContext::EvalContext(Catalog catalog)
    : catalog_(std::make_shared<const Catalog>(std::move(catalog))),
      t_stab_(catalog_->universe_max + catalog_->max_delay()) {
  catalog_->validate();
}

EvalContext::EvalContext(Catalog catalog, Nat stabilization_stage)
    : catalog_(std::make_shared<const Catalog>(std::move(catalog))), t_stab_(stabilization_stage) {
  catalog_->validate();
  if (t_stab_ < catalog_->universe_max + catalog_->max_delay()) {
    throw std::invalid_argument("stabilization stage below universe_max + max delay");
  }
}

void EvalContext::register_learner(const BmsLearner& m) {
  learners_.insert_or_assign(m.id(), m);
}

const BmsLearner& EvalContext::learner(const std::string& id) const {
  auto it = learners_.find(id);
  if (it == learners_.end()) throw UnresolvedReference("unknown learner id '" + id + "'");
  return it->second;
}

bool guard_holds(const EvalContext& ctx, const IndexExpr& guarded, Nat t) {
  const auto& m = ctx.learner(guarded.learner_id());
  const auto e = guarded.inner();
  const auto s = guarded.guard_state();
  const Hypothesis expected(e);
  for (auto x : enumerate_step(ctx, e, t)) {
    auto tr = m.step(s, Datum::number(x));
    if (!tr || tr->hyp != expected || tr->next != s) return false;
  }
  return true;
}

NatSet enumerate_step(const EvalContext& ctx, const IndexExpr& p, Nat t) {
  switch (p.kind()) {
    case IndexExpr::Kind::base: {
      auto it = ctx.catalog().entries.find(p.base_id());
      if (it == ctx.catalog().entries.end()) throw UnresolvedReference("unknown base id '" + p.base_id() + "'");
      NatSet out;
      for (auto x : it->second.elements) {
        if (x <= t && it->second.delay_of(x) <= t) out.insert(x);
      }
      return out;
    }
    case IndexExpr::Kind::padded:
      return enumerate_step(ctx, p.inner(), t);
    case IndexExpr::Kind::union_of: {
      auto out = p.extra();
      out.merge(enumerate_step(ctx, p.inner(), t));
      return out;
    }
    case IndexExpr::Kind::guarded: {
      NatSet out;
      const auto e = p.inner();
      for (Nat u = 0; u <= t; ++u) {
        if (guard_holds(ctx, p, u)) out.merge(enumerate_step(ctx, e, u));
      }
      return out;
    }
  }
  return {};
}

NatSet semantics(const EvalContext& ctx, const IndexExpr& p) {
  // Every schedule is constant from stage t_stab on, so the guard verdict is
  // too; one stage past it already contains the full union.
  return enumerate_step(ctx, p, ctx.stabilization_stage() + 1);
}

bool semantically_equal(const EvalContext& ctx, const IndexExpr& p, const IndexExpr& q) {
  return semantics(ctx, p) == semantics(ctx, q);
}

const NatSet& SemanticsCache::operator()(const IndexExpr& p) {
  auto it = memo_.find(p.term());
  if (it == memo_.end()) it = memo_.emplace(p.term(), semantics(*ctx_, p)).first;
  return it->second;
}

}  // namespace limitlab
