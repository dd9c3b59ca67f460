#include "limitlab/term.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <variant>

namespace limitlab {

struct Term::Node {
  std::variant<Nat, std::string, List> value;
};

Term::Term() : node_(std::make_shared<const Node>(Node{List{}})) {}

Term::Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Term Term::nat(Nat value) { return Term(std::make_shared<const Node>(Node{value})); }

Term Term::sym(std::string name) {
  return Term(std::make_shared<const Node>(Node{std::move(name)}));
}

Term Term::list(List items) {
  return Term(std::make_shared<const Node>(Node{std::move(items)}));
}

bool Term::is_nat() const { return std::holds_alternative<Nat>(node_->value); }
bool Term::is_sym() const { return std::holds_alternative<std::string>(node_->value); }
bool Term::is_list() const { return std::holds_alternative<List>(node_->value); }

Nat Term::as_nat() const {
  if (!is_nat()) throw std::logic_error("term is not a number: " + to_string());
  return std::get<Nat>(node_->value);
}

const std::string& Term::as_sym() const {
  if (!is_sym()) throw std::logic_error("term is not a symbol: " + to_string());
  return std::get<std::string>(node_->value);
}

const Term::List& Term::as_list() const {
  if (!is_list()) throw std::logic_error("term is not a list: " + to_string());
  return std::get<List>(node_->value);
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const auto& va = a.node_->value;
  const auto& vb = b.node_->value;
  if (va.index() != vb.index()) return va.index() <=> vb.index();
  switch (va.index()) {
    case 0:
      return std::get<0>(va) <=> std::get<0>(vb);
    case 1:
      return std::get<1>(va).compare(std::get<1>(vb)) <=> 0;
    default: {
      const auto& la = std::get<2>(va);
      const auto& lb = std::get<2>(vb);
      const auto n = std::min(la.size(), lb.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (auto c = la[i] <=> lb[i]; c != 0) return c;
      }
      return la.size() <=> lb.size();
    }
  }
}

std::string Term::to_string() const {
  std::ostringstream out;
  if (is_nat()) {
    out << as_nat();
  } else if (is_sym()) {
    out << as_sym();
  } else {
    out << '(';
    bool first = true;
    for (const auto& item : as_list()) {
      if (!first) out << ' ';
      first = false;
      out << item.to_string();
    }
    out << ')';
  }
  return out.str();
}

nlohmann::json Term::to_json() const {
  if (is_nat()) return as_nat();
  if (is_sym()) return as_sym();
  auto arr = nlohmann::json::array();
  for (const auto& item : as_list()) arr.push_back(item.to_json());
  return arr;
}

Term Term::from_json(const nlohmann::json& j) {
  if (j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    return nat(j.get<Nat>());
  }
  if (j.is_string()) return sym(j.get<std::string>());
  if (j.is_array()) {
    List items;
    items.reserve(j.size());
    for (const auto& e : j) items.push_back(from_json(e));
    return list(std::move(items));
  }
  throw std::invalid_argument("cannot read term from JSON value " + j.dump());
}

}  // namespace limitlab
