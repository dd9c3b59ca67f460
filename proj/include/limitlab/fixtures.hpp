#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "limitlab/hypspace.hpp"
#include "limitlab/learners.hpp"

namespace limitlab {

/// L4 = multiples of 4 up to 16, L2 = even numbers up to 16.
NatSet multiples_of_4();
NatSet evens();

/// Catalog shared by the fixtures and the random tables:
///   p4, p2                  L4, L2
///   s (subset suffix)       every subset of {0,1,2}, e.g. s, s0, s02, s012
///   d01, d2, d012           duplicates of s01, s2, s012 (d012 with a delay)
///   c01 c02 c0p c11 c12 c1p the revisit fixture's languages
///   p, q, p'                three names for {1}
Catalog default_catalog();

/// Ids of the subset languages and their duplicates, the pool random tables
/// draw conjectures from.
std::vector<std::string> small_language_ids();

/// "multiples": state 0 answers p4 on L4 ∪ {#} and moves to the absorbing
/// state 1 (answer p2) on any other even number. Odd data are undefined.
TransitionTable fixture_multiples();
/// "revisit": 0 -1-> 1 -2-> 0, every transition with its own conjecture.
TransitionTable fixture_revisit();
/// Four states 0 -> 1 -> 2 -> 3 on any datum answering p, q, p', then p'
/// forever: a syntactic U-shape with no semantic one.
TransitionTable fixture_u_shape();

/// Table fixture by name: "A"/"multiples", "C"/"revisit", "U"/"u_shape".
/// Throws std::invalid_argument for other names.
TransitionTable fixture(const std::string& name);

/// "counter": state q goes to q+1 on every datum, always answering p2. It
/// has infinitely many states, so it is not a table.
BmsLearner counter_learner();

/// Any fixture as a learner, the counter ("B"/"counter") included.
BmsLearner fixture_learner(const std::string& name);

// ---------------------------------------------------------------------------
// Seeded generation. Draws are taken modulo from mt19937_64 so corpora are
// identical across standard libraries.

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform-ish draw from [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  bool chance(double p) { return static_cast<double>(engine_() % 1000000) < p * 1000000.0; }

 private:
  std::mt19937_64 engine_;
};

struct TextGenParams {
  std::size_t count = 20;    // total texts, canonical ones included
  std::size_t max_head = 8;  // raised to |L| when smaller
  std::size_t max_tail = 3;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Texts with content exactly `language`: the sorted canonical text, two
/// pause-inflated variants, then random shuffles with repeats and pauses.
/// Throws ConfigError if the language leaves {0..universe_max}.
std::vector<Text> gen_texts(const NatSet& language, const TextGenParams& params, std::uint64_t seed,
                            Nat universe_max);

struct RandomTableParams {
  std::size_t max_states = 6;
  NatSet alphabet{0, 1, 2};
  std::vector<std::string> hypotheses = small_language_ids();
  double none_probability = 0.0;       // chance of a `?` output
  double undefined_probability = 0.0;  // chance of a missing row
};

/// BMS table over states 0..n-1 (n drawn from 1..max_states) with a row for
/// every (state, symbol) pair unless dropped as undefined.
TransitionTable random_bms_table(Rng& rng, const RandomTableParams& params, const std::string& id);

/// Iterative table whose previous-conjecture column ranges over `?` and
/// the hypothesis pool.
TransitionTable random_iter_table(Rng& rng, const RandomTableParams& params, const std::string& id);

}  // namespace limitlab
