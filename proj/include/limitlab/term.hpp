#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace limitlab {

using Nat = std::uint64_t;

/// Immutable structural value: a natural number, a symbol, or a list of terms.
///
/// Every composite object the learners pass around (states, visit logs,
/// padding payloads, index expressions) is canonically encoded as a Term, so
/// identity is plain structural equality and values are cheap to copy.
class Term {
 public:
  using List = std::vector<Term>;

  /// The empty list.
  Term();

  static Term nat(Nat value);
  static Term sym(std::string name);
  static Term list(List items);

  bool is_nat() const;
  bool is_sym() const;
  bool is_list() const;

  Nat as_nat() const;
  const std::string& as_sym() const;
  const List& as_list() const;

  bool is_sym(std::string_view name) const { return is_sym() && as_sym() == name; }

  /// Compact s-expression rendering, e.g. `(base p4)`.
  std::string to_string() const;

  nlohmann::json to_json() const;
  static Term from_json(const nlohmann::json& j);

  friend std::strong_ordering operator<=>(const Term& a, const Term& b);
  friend bool operator==(const Term& a, const Term& b) { return (a <=> b) == 0; }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

}  // namespace limitlab
