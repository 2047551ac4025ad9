#include "ssyn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "ssyn/code_json.hpp"

namespace ssyn {

namespace {

std::uint64_t round_seed(const EvalConfig& config, const std::string& ref_id,
                         int round) {
  return RngStream::mix(RngStream::mix(config.seed, RngStream::hash_string(ref_id)),
                        static_cast<std::uint64_t>(round));
}

std::vector<const Scenario*> ordered_scenarios(const BenchmarkStore& store,
                                               const std::string& ref_id) {
  std::vector<const Scenario*> scenarios =
      store.scenarios_for_reference(ref_id);
  std::sort(scenarios.begin(), scenarios.end(),
            [](const Scenario* a, const Scenario* b) { return a->id < b->id; });
  return scenarios;
}

double accuracy_percent(int correct, int total) {
  return total == 0 ? 0.0 : 100.0 * correct / total;
}

}  // namespace

RoundInstances generate_round_instances(const BenchmarkStore& store,
                                        const std::string& reference_task_id,
                                        const EvalConfig& config, int round) {
  const std::vector<const Scenario*> scenarios =
      ordered_scenarios(store, reference_task_id);
  if (scenarios.empty()) {
    throw std::invalid_argument("no scenarios for reference task " +
                                reference_task_id);
  }
  if (config.instances_per_ref_task %
          static_cast<int>(scenarios.size()) != 0) {
    throw std::invalid_argument(
        "instance count must be a multiple of the scenario count");
  }
  if (config.instances_per_ref_task % config.folds != 0) {
    throw std::invalid_argument(
        "instance count must be divisible by the fold count");
  }
  const int cycles =
      config.instances_per_ref_task / static_cast<int>(scenarios.size());

  RngStream base(round_seed(config, reference_task_id, round));
  RoundInstances out;
  out.instances.reserve(config.instances_per_ref_task);
  for (int cycle = 0; cycle < cycles; ++cycle) {
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      RngStream rng = base.derive(
          static_cast<std::uint64_t>(cycle) * scenarios.size() + i);
      out.instances.push_back(make_options(*scenarios[i], store, rng));
      out.fold_of.push_back(cycle % config.folds);
    }
  }
  return out;
}

EvalReport run_discriminative(const std::vector<Technique*>& techniques,
                              const BenchmarkStore& store,
                              const EvalConfig& config) {
  EvalReport report;
  report.config = config;
  report.reference_task_ids = store.reference_task_ids();
  for (Technique* t : techniques) {
    report.technique_names.push_back(t->name());
  }

  for (Technique* technique : techniques) {
    for (const std::string& ref_id : report.reference_task_ids) {
      TechniqueRefResult result;
      if (!technique->configured()) {
        result.status = "not configured";
        report.results[technique->name()][ref_id] = std::move(result);
        continue;
      }
      for (int round = 0; round < config.rounds; ++round) {
        const RoundInstances round_data =
            generate_round_instances(store, ref_id, config, round);
        const std::uint64_t technique_label =
            RngStream::hash_string(technique->name());

        auto accuracy_on = [&](int fold, bool include) {
          int correct = 0, total = 0;
          for (std::size_t i = 0; i < round_data.instances.size(); ++i) {
            const bool in_fold = round_data.fold_of[i] == fold;
            if (in_fold != include) continue;
            RngStream choice_rng =
                RngStream(round_seed(config, ref_id, round))
                    .derive(i)
                    .derive(technique_label);
            const std::size_t picked =
                technique->choose(round_data.instances[i], choice_rng);
            if (picked >= round_data.instances[i].options.size()) {
              throw std::logic_error("technique returned an option index "
                                     "out of range");
            }
            ++total;
            if (picked == round_data.instances[i].answer_index) ++correct;
          }
          return accuracy_percent(correct, total);
        };

        const std::vector<double> grid = technique->tuning_grid();
        if (!grid.empty()) {
          double best_value = grid.front();
          double best_acc = -1.0;
          for (double value : grid) {
            technique->set_hyperparameter(value);
            const double acc = accuracy_on(0, true);  // tuning fold only
            if (acc > best_acc) {
              best_acc = acc;
              best_value = value;
            }
          }
          technique->set_hyperparameter(best_value);
          result.tuned_hyperparameters.push_back(best_value);
        }
        result.round_accuracies.push_back(accuracy_on(0, false));
      }

      double sum = 0.0;
      for (double a : result.round_accuracies) sum += a;
      result.mean = result.round_accuracies.empty()
                        ? 0.0
                        : sum / result.round_accuracies.size();
      double var = 0.0;
      for (double a : result.round_accuracies) {
        var += (a - result.mean) * (a - result.mean);
      }
      result.stddev = result.round_accuracies.empty()
                          ? 0.0
                          : std::sqrt(var / result.round_accuracies.size());
      report.results[technique->name()][ref_id] = std::move(result);
    }
  }
  return report;
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json result_to_json(const TechniqueRefResult& r) {
  ordered_json j;
  j["status"] = r.status;
  j["round_accuracies"] = r.round_accuracies;
  j["mean"] = r.mean;
  j["stddev"] = r.stddev;
  j["tuned_hyperparameters"] = r.tuned_hyperparameters;
  return j;
}

TechniqueRefResult result_from_json(const nlohmann::json& j) {
  TechniqueRefResult r;
  r.status = j.at("status").get<std::string>();
  r.round_accuracies = j.at("round_accuracies").get<std::vector<double>>();
  r.mean = j.at("mean").get<double>();
  r.stddev = j.at("stddev").get<double>();
  r.tuned_hyperparameters =
      j.at("tuned_hyperparameters").get<std::vector<double>>();
  return r;
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  ordered_json j;
  j["config"] = {{"rounds", report.config.rounds},
                 {"instances_per_ref_task",
                  report.config.instances_per_ref_task},
                 {"folds", report.config.folds},
                 {"seed", report.config.seed}};
  j["reference_task_ids"] = report.reference_task_ids;
  j["technique_names"] = report.technique_names;
  ordered_json results = ordered_json::object();
  for (const std::string& name : report.technique_names) {
    ordered_json per_ref = ordered_json::object();
    for (const std::string& ref_id : report.reference_task_ids) {
      per_ref[ref_id] = result_to_json(report.results.at(name).at(ref_id));
    }
    results[name] = std::move(per_ref);
  }
  j["results"] = std::move(results);
  return j.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  EvalReport report;
  report.config.rounds = j.at("config").at("rounds").get<int>();
  report.config.instances_per_ref_task =
      j.at("config").at("instances_per_ref_task").get<int>();
  report.config.folds = j.at("config").at("folds").get<int>();
  report.config.seed = j.at("config").at("seed").get<std::uint64_t>();
  report.reference_task_ids =
      j.at("reference_task_ids").get<std::vector<std::string>>();
  report.technique_names =
      j.at("technique_names").get<std::vector<std::string>>();
  for (const std::string& name : report.technique_names) {
    for (const std::string& ref_id : report.reference_task_ids) {
      report.results[name][ref_id] =
          result_from_json(j.at("results").at(name).at(ref_id));
    }
  }
  return report;
}

std::string summarize(const EvalReport& report) {
  std::ostringstream out;
  out << "technique";
  for (const std::string& ref_id : report.reference_task_ids) {
    out << "\t" << ref_id;
  }
  out << "\n";
  for (const std::string& name : report.technique_names) {
    out << name;
    for (const std::string& ref_id : report.reference_task_ids) {
      const TechniqueRefResult& r = report.results.at(name).at(ref_id);
      out << "\t";
      if (r.status != "ok") {
        out << r.status;
      } else {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.2f +- %.2f", r.mean, r.stddev);
        out << buf;
      }
    }
    out << "\n";
  }
  return out.str();
}

std::vector<std::string> collect_eval_codes(const BenchmarkStore& store,
                                            const EvalConfig& config) {
  std::set<std::string> codes;
  for (const std::string& ref_id : store.reference_task_ids()) {
    for (int round = 0; round < config.rounds; ++round) {
      const RoundInstances round_data =
          generate_round_instances(store, ref_id, config, round);
      for (const DiscriminativeInstance& inst : round_data.instances) {
        codes.insert(serialize_code(inst.observed_attempt));
        for (const ProgramAst& option : inst.options) {
          codes.insert(serialize_code(option));
        }
      }
    }
  }
  return {codes.begin(), codes.end()};
}

const std::map<std::string, std::string>& likert_rubric() {
  static const std::map<std::string, std::string> rubric = {
      {"1", "no synthesis capability"},
      {"2", "misses both the observed student behavior and the target task"},
      {"3", "captures the observed student behavior or the target task, "
            "not both"},
      {"4", "captures both the observed student behavior and the target "
            "task"},
  };
  return rubric;
}

GenerativeOutput run_generative(Technique& technique,
                                const BenchmarkStore& store,
                                std::uint64_t seed, int sample_count) {
  if (!technique.can_synthesize()) {
    throw std::runtime_error("technique '" + technique.name() +
                             "' has no synthesis capability");
  }
  GenerativeOutput out;
  out.technique = technique.name();
  RngStream base(seed);
  std::uint64_t label = 0;
  for (const std::string& ref_id : store.reference_task_ids()) {
    for (const std::string& target : store.targets_of(ref_id)) {
      for (const BehaviorType& type : store.registry().types_for(ref_id)) {
        RngStream rng = base.derive(label++);
        const int student = 1 + static_cast<int>(rng.uniform_int(2));
        const Scenario& scenario =
            store.find_scenario(ref_id, target, type.id, student);
        std::vector<SynthesizedCode> ranked =
            technique.synthesize(scenario, rng, sample_count);
        GenerativeRow row;
        row.scenario_id = scenario.id;
        const int top_k =
            std::min<int>(kGenerativeTopK, static_cast<int>(ranked.size()));
        for (int i = 0; i < top_k; ++i) {
          row.top_codes.push_back(serialize_code(ranked[i].code));
        }
        out.sheet.push_back(
            {scenario.id, technique.name(),
             row.top_codes.empty() ? "" : row.top_codes.front()});
        out.rows.push_back(std::move(row));
      }
    }
  }
  return out;
}

std::string generative_to_json(const GenerativeOutput& out) {
  ordered_json j;
  j["technique"] = out.technique;
  j["rubric"] = likert_rubric();
  j["rows"] = ordered_json::array();
  for (const GenerativeRow& row : out.rows) {
    ordered_json r;
    r["scenario"] = row.scenario_id;
    r["top_codes"] = row.top_codes;
    j["rows"].push_back(std::move(r));
  }
  j["sheet"] = ordered_json::array();
  for (const LikertSheetRow& row : out.sheet) {
    ordered_json r;
    r["scenario"] = row.scenario_id;
    r["technique"] = row.technique;
    r["synthesized_code"] = row.synthesized_code;
    r["score"] = nullptr;
    r["rater"] = nullptr;
    j["sheet"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

}  // namespace ssyn
