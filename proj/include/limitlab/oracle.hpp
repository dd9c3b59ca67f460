#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "limitlab/hypspace.hpp"
#include "limitlab/learners.hpp"
#include "limitlab/restrictions.hpp"

namespace limitlab {

/// More sequences requested than the oracle will enumerate.
class OracleExplosion : public std::runtime_error {
 public:
  OracleExplosion(std::size_t count, std::size_t limit);
  std::size_t count;
};

inline constexpr std::size_t kOracleSequenceLimit = 1'000'000;

/// Learner behaviour on one finite sequence.
struct OracleRun {
  FinSeq seq;
  std::optional<State> state;  // s*(seq); empty once diverged
  Hypothesis hyp;              // M(seq); `?` for the empty sequence
  std::optional<std::size_t> divergence;
};

struct OracleVerdicts {
  FinSeq head;  // verdicts are for the text head ⌢ #^ω
  std::map<Predicate, Outcome> outcomes;
};

struct OracleTable {
  std::size_t sequences = 0;
  std::size_t reachable_states = 0;
  std::vector<OracleRun> runs;
  std::vector<OracleVerdicts> verdicts;  // one per nonempty sequence

  nlohmann::json to_json() const;
};

/// Number of sequences over `symbols` symbols of length 0..max_len.
std::size_t oracle_sequence_count(std::size_t symbols, std::size_t max_len);

/// Every sequence over alphabet ∪ {#} up to `max_len` with the learner's
/// state and conjecture, plus all predicate outcomes on head ⌢ #^ω for each
/// nonempty sequence as head.
///
/// Throws OracleExplosion past kOracleSequenceLimit sequences and
/// std::invalid_argument if more than `state_cap` states are reachable.
OracleTable brute_force_oracle(const BmsLearner& m, const NatSet& alphabet, std::size_t max_len,
                               const EvalContext& ctx, std::size_t state_cap = 4096);

/// Outcomes on head ⌢ #^ω by expanding every quantifier over an explicit
/// horizon. `reachable_states` bounds the learner's state space on the data
/// involved and fixes the horizon.
std::map<Predicate, Outcome> oracle_verdicts(const BmsLearner& m, const FinSeq& head, std::size_t reachable_states,
                                             SemanticsCache& sem);

/// Horizon used for a head of length n and S reachable states.
std::size_t oracle_horizon(std::size_t head_length, std::size_t reachable_states);

}  // namespace limitlab
