#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ssyn/benchmark.hpp"
#include "ssyn/techniques.hpp"

namespace ssyn {

struct EvalConfig {
  int rounds = 5;
  int instances_per_ref_task = 360;
  int folds = 10;
  std::uint64_t seed = 0;
  bool operator==(const EvalConfig&) const = default;
};

struct TechniqueRefResult {
  std::string status = "ok";  // or "not configured"
  std::vector<double> round_accuracies;  // percent, one per round
  double mean = 0.0;                     // arithmetic mean over rounds
  double stddev = 0.0;                   // population std dev over rounds
  std::vector<double> tuned_hyperparameters;  // one per round when tuned
  bool operator==(const TechniqueRefResult&) const = default;
};

struct EvalReport {
  EvalConfig config;
  std::vector<std::string> reference_task_ids;
  std::vector<std::string> technique_names;
  // technique -> reference task -> result
  std::map<std::string, std::map<std::string, TechniqueRefResult>> results;
  bool operator==(const EvalReport&) const = default;
};

// One evaluation round's worth of instances for a reference task: the
// scenario set cycled with fresh option randomization, every (target, type,
// student) cell equally often. fold_of[i] = cycle index modulo fold count.
struct RoundInstances {
  std::vector<DiscriminativeInstance> instances;
  std::vector<int> fold_of;
};

RoundInstances generate_round_instances(const BenchmarkStore& store,
                                        const std::string& reference_task_id,
                                        const EvalConfig& config, int round);

// Rounds x instances discriminative protocol with per-round hyperparameter
// tuning on fold 0 and measurement on the remaining folds.
EvalReport run_discriminative(const std::vector<Technique*>& techniques,
                              const BenchmarkStore& store,
                              const EvalConfig& config);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& text);

// Table-shaped comparison: one row per technique, mean +/- std per
// reference task.
std::string summarize(const EvalReport& report);

// Every code (canonical serialization) that a run with this config touches:
// observed attempts and all generated options. Input list for building an
// embedding distance matrix.
std::vector<std::string> collect_eval_codes(const BenchmarkStore& store,
                                            const EvalConfig& config);

struct GenerativeRow {
  std::string scenario_id;
  std::vector<std::string> top_codes;  // canonical serializations, best first
};

struct LikertSheetRow {
  std::string scenario_id;
  std::string technique;
  std::string synthesized_code;  // top-1
  // score in {1,2,3,4} and rater id stay empty; filling them in is a human
  // task by design.
};

struct GenerativeOutput {
  std::string technique;
  std::vector<GenerativeRow> rows;        // one per evaluated scenario
  std::vector<LikertSheetRow> sheet;      // one per evaluated scenario
};

// Score levels recorded alongside every sheet.
const std::map<std::string, std::string>& likert_rubric();

inline constexpr int kGenerativeTopK = 3;

// Runs synthesis for the 36 evaluation scenarios (18 per reference task:
// every target and type once, student picked by the seeded stream) and
// emits an empty score sheet. Techniques without synthesis capability are
// rejected.
GenerativeOutput run_generative(Technique& technique,
                                const BenchmarkStore& store,
                                std::uint64_t seed, int sample_count = 1000);

std::string generative_to_json(const GenerativeOutput& out);

}  // namespace ssyn
