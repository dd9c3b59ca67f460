#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "limitlab/term.hpp"

namespace limitlab {

using NatSet = std::set<Nat>;

/// Input symbol: a coded word (natural number) or the pause symbol `#`.
class Datum {
 public:
  constexpr Datum() = default;  // pause
  static constexpr Datum pause() { return Datum(); }
  static constexpr Datum number(Nat n) { return Datum(n); }

  constexpr bool is_pause() const { return !value_.has_value(); }
  constexpr bool is_number() const { return value_.has_value(); }
  Nat value() const;

  Term to_term() const;
  static Datum from_term(const Term& t);

  /// `#` or the decimal number.
  std::string to_string() const;
  /// Accepts `#` or a decimal natural number (surrounding blanks ignored).
  static Datum parse(std::string_view token);

  friend constexpr auto operator<=>(const Datum&, const Datum&) = default;

 private:
  constexpr explicit Datum(Nat n) : value_(n) {}
  std::optional<Nat> value_;
};

using FinSeq = std::vector<Datum>;

/// Eventually periodic presentation: `head` followed by `tail` repeated forever.
struct Text {
  FinSeq head;
  FinSeq tail{Datum::pause()};

  Text() = default;
  /// Throws std::invalid_argument when `tail` is empty.
  Text(FinSeq head, FinSeq tail);

  /// The datum at position `t` of the infinite sequence.
  Datum at(std::size_t t) const;

  /// `head|tail` literal, e.g. `4,2|#`.
  std::string to_string() const;
  /// Parses `head|tail`; a missing `|tail` part defaults the tail to `#`.
  static Text parse(std::string_view literal);

  friend bool operator==(const Text&, const Text&) = default;
};

/// Numbers occurring in the sequence, pauses excluded.
NatSet content(std::span<const Datum> seq);
NatSet content(const Text& text);

/// First `t` elements of `seq`; throws std::out_of_range when `t > |seq|`.
FinSeq restrict(std::span<const Datum> seq, std::size_t t);

bool is_consistent(std::span<const Datum> seq, const NatSet& allowed);

/// Length-`n` prefix of head, tail, tail, ...
FinSeq expand(const Text& text, std::size_t n);

FinSeq parse_seq(std::string_view items);
std::string format_seq(std::span<const Datum> seq);

std::string format_set(const NatSet& set);

}  // namespace limitlab
