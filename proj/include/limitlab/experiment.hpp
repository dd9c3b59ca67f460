#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "limitlab/fixtures.hpp"
#include "limitlab/hypspace.hpp"
#include "limitlab/learners.hpp"
#include "limitlab/restrictions.hpp"
#include "limitlab/trace.hpp"
#include "limitlab/transforms.hpp"

namespace limitlab {

/// A BMS or iterative learner plus what is needed to evaluate its conjectures.
struct AnyLearner {
  std::variant<BmsLearner, IterLearner> learner;
  /// Set on the output of `sconv`: the learner it factors through.
  std::optional<BmsLearner> sconv_source;
  /// Learners named by guarded indices in the conjectures.
  std::vector<BmsLearner> dependencies;
  /// Numbers the source table mentions; the default alphabet for exploring it.
  NatSet data;

  const std::string& id() const;
  bool is_bms() const { return std::holds_alternative<BmsLearner>(learner); }
  const BmsLearner& bms() const;
  const IterLearner& iterative() const;
};

/// `builtin:NAME` for a fixture, otherwise a JSON table file (relative paths
/// resolve against `base`). Throws ConfigError with the file name on failure.
AnyLearner load_learner(const std::string& ref, const std::filesystem::path& base = {});

/// Ops: it2bms, bms2it, statedec, sconv, wb. Throws ConfigError on an unknown
/// op or a learner of the wrong kind.
AnyLearner apply_transform(const AnyLearner& m, const std::string& op, PathMode mode = PathMode::exclusive);

/// Registers the learner (if BMS) and its dependencies.
void register_learner(EvalContext& ctx, const AnyLearner& m);

Trace trace(const AnyLearner& m, const Text& text, std::size_t budget);

/// Catalog from a JSON file; throws ConfigError naming the file.
Catalog load_catalog(const std::filesystem::path& path);

struct LanguageSpec {
  std::string label;  // catalog id or element list
  NatSet elements;
};

struct ExperimentConfig {
  std::optional<std::filesystem::path> catalog;  // built-in catalog when absent
  std::vector<std::string> learners;
  std::vector<std::vector<std::string>> transforms{{}};  // pipelines; {} is the learner itself
  std::vector<Text> texts;
  std::vector<LanguageSpec> languages;  // each contributes gen_texts(language)
  TextGenParams generation;
  std::uint64_t seed = 0;
  std::size_t budget = 256;
  std::vector<Predicate> predicates;
  std::vector<Predicate> asserted;  // must not come out VIOLATED
  bool undetermined_fails = false;
  bool audit = true;
  PathMode path_mode = PathMode::exclusive;

  /// Field-by-field parse. Language ids are resolved against the catalog
  /// (given or built in). Throws ConfigError.
  static ExperimentConfig from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
  static ExperimentConfig from_file(const std::filesystem::path& path);
};

/// Replaces the seed with LIMITLAB_SEED when that variable is set.
/// Throws ConfigError if it is not a number.
void apply_seed_override(ExperimentConfig& cfg);

struct ExperimentReport {
  nlohmann::json json;
  int exit_code = 0;
};

/// Traces every (learner, text) pair, checks the predicates, runs the
/// implication audit and summarises. Divergences are reported per pair.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// One line per (learner, text) pair with the predicate outcomes.
std::string summary_table(const nlohmann::json& report);

}  // namespace limitlab
