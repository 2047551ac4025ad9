#include "doctest.h"

#include <set>

#include "ssyn/code_json.hpp"
#include "ssyn/harness.hpp"

using namespace ssyn;

namespace {

const BenchmarkStore& store() {
  static const BenchmarkStore s = BenchmarkStore::load(SSYN_DATA_DIR);
  return s;
}

EvalConfig small_config() {
  EvalConfig config;
  config.rounds = 2;
  config.instances_per_ref_task = 72;  // two cycles of 36
  config.folds = 2;
  config.seed = 42;
  return config;
}

}  // namespace

TEST_CASE("round instances are balanced across cells") {
  const RoundInstances round =
      generate_round_instances(store(), "T4", small_config(), 0);
  REQUIRE(round.instances.size() == 72);
  std::map<std::string, int> per_scenario;
  for (const DiscriminativeInstance& inst : round.instances) {
    per_scenario[inst.scenario_id] += 1;
  }
  CHECK(per_scenario.size() == 36);
  for (const auto& [_, count] : per_scenario) CHECK(count == 2);
}

TEST_CASE("instance counts must divide by folds and scenarios") {
  EvalConfig config = small_config();
  config.instances_per_ref_task = 73;
  CHECK_THROWS(generate_round_instances(store(), "T4", config, 0));
  config.instances_per_ref_task = 36;
  config.folds = 7;
  CHECK_THROWS(generate_round_instances(store(), "T4", config, 0));
}

TEST_CASE("tuning and measurement folds never overlap") {
  const EvalConfig config = small_config();
  const RoundInstances round =
      generate_round_instances(store(), "T4", config, 0);
  std::set<std::size_t> tune, measure;
  for (std::size_t i = 0; i < round.instances.size(); ++i) {
    (round.fold_of[i] == 0 ? tune : measure).insert(i);
  }
  CHECK(tune.size() == 36);
  CHECK(measure.size() == 36);
  for (std::size_t i : tune) CHECK(measure.count(i) == 0);
}

TEST_CASE("a perfect oracle scores exactly 100") {
  PerfectOracle oracle;
  const EvalReport report =
      run_discriminative({&oracle}, store(), small_config());
  for (const std::string& ref : report.reference_task_ids) {
    const TechniqueRefResult& r = report.results.at("PerfectOracle").at(ref);
    CHECK(r.status == "ok");
    CHECK(r.mean == 100.0);
    CHECK(r.stddev == 0.0);
  }
}

TEST_CASE("an unconfigured technique is skipped with a status") {
  EditEmbD unconfigured;
  const EvalReport report =
      run_discriminative({&unconfigured}, store(), small_config());
  const TechniqueRefResult& r = report.results.at("EditEmbD").at("T4");
  CHECK(r.status == "not configured");
  CHECK(r.round_accuracies.empty());
}

TEST_CASE("a configured embedding technique tunes alpha on the first fold") {
  // matrix over every code the run touches, with a proxy embedding distance
  // (difference of program sizes)
  const EvalConfig config = small_config();
  const std::vector<std::string> codes = collect_eval_codes(store(), config);
  std::vector<std::vector<double>> values(
      codes.size(), std::vector<double>(codes.size(), 0.0));
  for (std::size_t i = 0; i < codes.size(); ++i) {
    for (std::size_t j = 0; j < codes.size(); ++j) {
      const int si = code_attributes(parse_code(codes[i])).size;
      const int sj = code_attributes(parse_code(codes[j])).size;
      values[i][j] = std::abs(si - sj);
    }
  }
  EditEmbD technique(DistanceMatrix(codes, values));
  const EvalReport report =
      run_discriminative({&technique}, store(), config);
  for (const std::string& ref : report.reference_task_ids) {
    const TechniqueRefResult& r = report.results.at("EditEmbD").at(ref);
    CHECK(r.status == "ok");
    CHECK(r.tuned_hyperparameters.size() ==
          static_cast<std::size_t>(config.rounds));
    for (double alpha : r.tuned_hyperparameters) {
      CHECK(alpha >= 0.0);
      CHECK(alpha <= 1.0);
    }
  }
}

TEST_CASE("reports are deterministic and round trip through json") {
  RandD rand_d;
  EditD edit_d;
  const EvalConfig config = small_config();
  const EvalReport a = run_discriminative({&rand_d, &edit_d}, store(), config);
  const EvalReport b = run_discriminative({&rand_d, &edit_d}, store(), config);
  CHECK(report_to_json(a) == report_to_json(b));
  CHECK(report_from_json(report_to_json(a)) == a);
}

TEST_CASE("summaries render one row per technique") {
  RandD rand_d;
  const EvalReport report =
      run_discriminative({&rand_d}, store(), small_config());
  const std::string table = summarize(report);
  CHECK(table.find("RandD") != std::string::npos);
  CHECK(table.find("T4") != std::string::npos);
  CHECK(table.find("T18") != std::string::npos);

  // an empty technique list still renders the header
  const EvalReport empty = run_discriminative({}, store(), small_config());
  CHECK(summarize(empty).find("technique") == 0);
}

TEST_CASE("single round reports have zero deviation") {
  RandD rand_d;
  EvalConfig config = small_config();
  config.rounds = 1;
  const EvalReport report = run_discriminative({&rand_d}, store(), config);
  CHECK(report.results.at("RandD").at("T4").stddev == 0.0);
}

TEST_CASE("generative runs cover the 36 scenarios with top-3 codes") {
  SymSS symss(store());
  const GenerativeOutput out = run_generative(symss, store(), 7, 300);
  CHECK(out.rows.size() == 36);
  CHECK(out.sheet.size() == 36);
  std::set<std::string> distinct;
  for (const GenerativeRow& row : out.rows) {
    distinct.insert(row.scenario_id);
    CHECK(row.top_codes.size() == 3);
  }
  CHECK(distinct.size() == 36);
  const std::string json_text = generative_to_json(out);
  CHECK(json_text.find("\"score\": null") != std::string::npos);
  CHECK(likert_rubric().size() == 4);
}

TEST_CASE("techniques without synthesis capability are rejected") {
  EditD edit_d;
  CHECK_THROWS_WITH(run_generative(edit_d, store(), 7, 10),
                    doctest::Contains("no synthesis capability"));
  RandD rand_d;
  CHECK_THROWS(run_generative(rand_d, store(), 7, 10));
}
