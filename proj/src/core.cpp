#include "limitlab/core.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace limitlab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Nat Datum::value() const {
  if (!value_) throw std::logic_error("pause symbol has no numeric value");
  return *value_;
}

Term Datum::to_term() const { return value_ ? Term::nat(*value_) : Term::sym("#"); }

Datum Datum::from_term(const Term& t) {
  if (t.is_nat()) return number(t.as_nat());
  if (t.is_sym("#")) return pause();
  throw std::invalid_argument("term is not a datum: " + t.to_string());
}

std::string Datum::to_string() const { return value_ ? std::to_string(*value_) : "#"; }

Datum Datum::parse(std::string_view token) {
  token = trim(token);
  if (token == "#") return pause();
  Nat n = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, n);
  if (token.empty() || ec != std::errc{} || ptr != last) {
    throw std::invalid_argument("not a datum: '" + std::string(token) + "'");
  }
  return number(n);
}

Text::Text(FinSeq h, FinSeq t) : head(std::move(h)), tail(std::move(t)) {
  if (tail.empty()) throw std::invalid_argument("text tail must be nonempty");
}

Datum Text::at(std::size_t t) const {
  if (t < head.size()) return head[t];
  return tail[(t - head.size()) % tail.size()];
}

std::string Text::to_string() const { return format_seq(head) + "|" + format_seq(tail); }

Text Text::parse(std::string_view literal) {
  const auto bar = literal.find('|');
  if (bar == std::string_view::npos) return Text(parse_seq(literal), {Datum::pause()});
  if (literal.find('|', bar + 1) != std::string_view::npos) {
    throw std::invalid_argument("text literal has more than one '|': " + std::string(literal));
  }
  return Text(parse_seq(literal.substr(0, bar)), parse_seq(literal.substr(bar + 1)));
}

NatSet content(std::span<const Datum> seq) {
  NatSet out;
  for (const auto& d : seq) {
    if (d.is_number()) out.insert(d.value());
  }
  return out;
}

NatSet content(const Text& text) {
  auto out = content(text.head);
  out.merge(content(text.tail));
  return out;
}

FinSeq restrict(std::span<const Datum> seq, std::size_t t) {
  if (t > seq.size()) {
    throw std::out_of_range("restriction length " + std::to_string(t) + " exceeds sequence length " +
                            std::to_string(seq.size()));
  }
  return FinSeq(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(t));
}

bool is_consistent(std::span<const Datum> seq, const NatSet& allowed) {
  return std::all_of(seq.begin(), seq.end(),
                     [&](const Datum& d) { return d.is_pause() || allowed.contains(d.value()); });
}

FinSeq expand(const Text& text, std::size_t n) {
  FinSeq out;
  out.reserve(n);
  for (std::size_t t = 0; t < n; ++t) out.push_back(text.at(t));
  return out;
}

FinSeq parse_seq(std::string_view items) {
  FinSeq out;
  items = trim(items);
  if (items.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = items.find(',', pos);
    out.push_back(Datum::parse(items.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string format_seq(std::span<const Datum> seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ',';
    out += seq[i].to_string();
  }
  return out;
}

std::string format_set(const NatSet& set) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (auto x : set) {
    if (!first) out << ',';
    first = false;
    out << x;
  }
  out << '}';
  return out.str();
}

}  // namespace limitlab
