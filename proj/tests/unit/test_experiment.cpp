#include <doctest.h>

#include <cstdlib>

#include "limitlab/experiment.hpp"
#include "limitlab/fixtures.hpp"

using namespace limitlab;

namespace {

const std::filesystem::path kData = LIMITLAB_DATA_DIR;

nlohmann::json without_timestamp(nlohmann::json j) {
  j.erase("timestamp");
  return j;
}

}  // namespace

TEST_CASE("multiples experiment passes its assertions") {
  const auto cfg = ExperimentConfig::from_file(kData / "experiment_multiples.json");
  CHECK(cfg.learners.size() == 1);
  CHECK(cfg.transforms.size() == 2);
  const auto report = run_experiment(cfg);
  CHECK(report.exit_code == 0);
  CHECK(report.json["asserted_failures"].empty());
  for (const auto& pair : report.json["pairs"]) {
    CHECK(pair["verdicts"]["EX"]["outcome"] == "HOLDS");
    CHECK(pair["verdicts"]["BMS_STAR"]["outcome"] == "HOLDS");
    if (pair["learner"] == "wb(A)") CHECK(pair["verdicts"]["WB"]["outcome"] == "HOLDS");
  }
  CHECK(report.json["summary"]["EX"]["VIOLATED"] == 0);
  CHECK(report.json["audit"]["violations"].empty());
  CHECK(without_timestamp(run_experiment(cfg).json) == without_timestamp(report.json));
  CHECK_FALSE(summary_table(report.json).empty());
}

TEST_CASE("u-shape experiment fails its assertion") {
  const auto report = run_experiment(ExperimentConfig::from_file(kData / "experiment_u_shape.json"));
  CHECK(report.exit_code != 0);
  REQUIRE(report.json["asserted_failures"].size() == 1);
  CHECK(report.json["asserted_failures"][0]["predicate"] == "SNU");
  CHECK(report.json["asserted_failures"][0]["witness"] == nlohmann::json::array({0, 1, 2}));
  CHECK(report.json["pairs"][0]["verdicts"]["NU"]["outcome"] == "HOLDS");
}

TEST_CASE("learner references and transforms") {
  CHECK(load_learner("builtin:A").id() == "A");
  CHECK(load_learner("builtin:counter").id() == "B");
  CHECK(load_learner("fixture_revisit.json", kData).id() == "C");
  CHECK_THROWS_AS(load_learner("missing.json", kData), ConfigError);
  CHECK_THROWS_AS(load_learner("builtin:nope"), ConfigError);

  const auto a = load_learner("builtin:A");
  const auto it = apply_transform(a, "bms2it");
  CHECK_FALSE(it.is_bms());
  CHECK(apply_transform(it, "it2bms").id() == "it2bms(bms2it(A))");
  CHECK_THROWS_AS(apply_transform(it, "statedec"), ConfigError);
  CHECK_THROWS_AS(apply_transform(a, "it2bms"), ConfigError);
  CHECK_THROWS_AS(apply_transform(a, "frobnicate"), ConfigError);
  const auto wb = apply_transform(apply_transform(a, "sconv"), "wb");
  CHECK(wb.id() == "wb(A)");

  EvalContext ctx(default_catalog());
  register_learner(ctx, wb);
  CHECK_NOTHROW(ctx.learner("A"));
}

TEST_CASE("config parsing") {
  const auto j = nlohmann::json::parse(R"({
    "learners": ["builtin:A"], "transforms": ["", ["statedec"]],
    "languages": ["p4", [0, 2]], "texts": ["4|#"], "seed": 5, "budget": 32,
    "generation": {"count": 3}, "predicates": ["ex", "SMON"], "path_mode": "inclusive"})");
  const auto cfg = ExperimentConfig::from_json(j);
  CHECK(cfg.transforms.size() == 2);
  CHECK(cfg.transforms[1] == std::vector<std::string>{"statedec"});
  CHECK(cfg.languages.size() == 2);
  CHECK(cfg.languages[1].elements == NatSet{0, 2});
  CHECK(cfg.generation.count == 3);
  CHECK(cfg.path_mode == PathMode::inclusive);
  CHECK(cfg.predicates == std::vector<Predicate>{Predicate::EX, Predicate::SMON});

  CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json::parse(R"({"learners": []})")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json::parse(R"({"learners": ["builtin:A"], "languages": ["nope"]})")),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json::parse(R"({"learners": ["builtin:A"], "predicates": ["XYZ"]})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::from_file(kData / "nope.json"), ConfigError);
}

TEST_CASE("seed override") {
  ExperimentConfig cfg;
  cfg.seed = 3;
  ::unsetenv("LIMITLAB_SEED");
  apply_seed_override(cfg);
  CHECK(cfg.seed == 3);
  ::setenv("LIMITLAB_SEED", "99", 1);
  apply_seed_override(cfg);
  CHECK(cfg.seed == 99);
  ::setenv("LIMITLAB_SEED", "abc", 1);
  CHECK_THROWS_AS(apply_seed_override(cfg), ConfigError);
  ::unsetenv("LIMITLAB_SEED");
}
