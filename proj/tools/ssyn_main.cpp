#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ssyn/benchmark.hpp"
#include "ssyn/code_json.hpp"
#include "ssyn/edit_distance.hpp"
#include "ssyn/harness.hpp"
#include "ssyn/interpreter.hpp"
#include "ssyn/pcfg.hpp"
#include "ssyn/task.hpp"
#include "ssyn/techniques.hpp"
#include "ssyn/tokens.hpp"

namespace {

using nlohmann::ordered_json;

std::string default_data_dir() {
  if (const char* env = std::getenv("SSYN_DATA_DIR")) return env;
  return "data";
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

int cmd_exec(const std::string& task_path, const std::string& code_path,
             bool trace, bool as_json, int max_steps) {
  const ssyn::MazeTask task = ssyn::load_task(task_path);
  const ssyn::ProgramAst code = ssyn::load_code_file(code_path);
  const ssyn::ExecOutcome outcome =
      ssyn::execute(task, code, max_steps, trace);
  if (as_json) {
    ordered_json j;
    j["status"] = ssyn::exec_status_name(outcome.status);
    j["steps_used"] = outcome.steps_used;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << ssyn::exec_status_name(outcome.status)
              << " steps=" << outcome.steps_used << "\n";
  }
  if (trace && outcome.trace) {
    std::cout << ssyn::trace_to_json_lines(*outcome.trace);
  }
  return outcome.status == ssyn::ExecStatus::Solved ? 0 : 1;
}

int cmd_distance(const std::string& code_a, const std::string& code_b,
                 bool as_json) {
  const ssyn::ProgramAst a = ssyn::load_code_file(code_a);
  const ssyn::ProgramAst b = ssyn::load_code_file(code_b);
  const int d = ssyn::tree_edit_distance(a, b);
  if (as_json) {
    ordered_json j;
    j["distance"] = d;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << d << "\n";
  }
  return 0;
}

int cmd_infer(const std::string& data_dir, const std::string& ref_id,
              const std::string& attempt_path, bool as_json) {
  const ssyn::BenchmarkStore store = ssyn::BenchmarkStore::load(data_dir);
  const ssyn::ProgramAst attempt = ssyn::load_code_file(attempt_path);
  ssyn::SymSS symss(store);
  const ssyn::InferenceResult result = symss.infer(ref_id, attempt);
  if (as_json) {
    ordered_json j;
    j["type"] = result.type_id ? ordered_json(*result.type_id)
                               : ordered_json(nullptr);
    ordered_json scores = ordered_json::object();
    for (const ssyn::TypeScore& s : result.scores) {
      scores[s.type_id] = s.log_likelihood
                              ? ordered_json(*s.log_likelihood)
                              : ordered_json(nullptr);
    }
    j["log_likelihoods"] = std::move(scores);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (result.type_id ? *result.type_id : "Undetermined") << "\n";
    for (const ssyn::TypeScore& s : result.scores) {
      std::cout << "  " << s.type_id << ": ";
      if (s.log_likelihood) {
        std::cout << "log p = " << *s.log_likelihood;
      } else {
        std::cout << "p = 0";
      }
      std::cout << "\n";
    }
  }
  return 0;
}

int cmd_synthesize(const std::string& data_dir, const std::string& ref_id,
                   const std::string& target_id, const std::string& type_id,
                   int samples, std::uint64_t seed, int top_k, bool as_json) {
  const ssyn::BenchmarkStore store = ssyn::BenchmarkStore::load(data_dir);
  ssyn::GrammarCreator creator(ref_id, store.registry());
  ssyn::RngStream rng(seed);
  const auto ranked = creator.synthesize_attempt(
      store.task(target_id), store.solution(target_id), type_id, rng,
      samples);
  const int n = std::min<int>(top_k, static_cast<int>(ranked.size()));
  if (as_json) {
    ordered_json j = ordered_json::array();
    for (int i = 0; i < n; ++i) {
      ordered_json row;
      row["code"] = ordered_json::parse(ssyn::serialize_code(ranked[i].code));
      row["score"] = ranked[i].score;
      j.push_back(std::move(row));
    }
    std::cout << j.dump(2) << "\n";
  } else {
    for (int i = 0; i < n; ++i) {
      std::cout << "# score " << ranked[i].score << "\n"
                << ssyn::pretty_print(ranked[i].code);
    }
  }
  return 0;
}

int cmd_gen_options(const std::string& data_dir, const std::string& scenario_id,
                    std::uint64_t seed, bool as_json) {
  const ssyn::BenchmarkStore store = ssyn::BenchmarkStore::load(data_dir);
  const ssyn::Scenario& scenario = store.scenario(scenario_id);
  ssyn::RngStream rng(seed);
  const ssyn::DiscriminativeInstance inst =
      ssyn::make_options(scenario, store, rng);
  if (as_json) {
    ordered_json j;
    j["scenario"] = inst.scenario_id;
    j["options"] = ordered_json::array();
    for (const ssyn::ProgramAst& o : inst.options) {
      j["options"].push_back(ordered_json::parse(ssyn::serialize_code(o)));
    }
    j["answer_index"] = inst.answer_index;
    std::cout << j.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < inst.options.size(); ++i) {
      std::cout << "option " << i
                << (i == inst.answer_index ? " (answer)" : "") << ":\n"
                << ssyn::pretty_print(inst.options[i]);
    }
  }
  return 0;
}

int cmd_eval(const std::string& data_dir, const ssyn::EvalConfig& config,
             const std::string& emb_matrix, const std::string& out_path,
             const std::string& export_codes, bool as_json) {
  const ssyn::BenchmarkStore store = ssyn::BenchmarkStore::load(data_dir);

  if (!export_codes.empty()) {
    const auto codes = ssyn::collect_eval_codes(store, config);
    ordered_json j = codes;
    write_output(j.dump(2) + "\n", export_codes);
    return 0;
  }

  ssyn::RandD rand_d;
  ssyn::EditD edit_d;
  std::optional<ssyn::EditEmbD> edit_emb;
  if (emb_matrix.empty()) {
    edit_emb.emplace();
  } else {
    edit_emb.emplace(ssyn::DistanceMatrix::load_csv(emb_matrix));
  }
  ssyn::SymSS symss(store);
  const std::vector<ssyn::Technique*> techniques = {&rand_d, &edit_d,
                                                    &*edit_emb, &symss};
  const ssyn::EvalReport report =
      ssyn::run_discriminative(techniques, store, config);
  const std::string json_text = ssyn::report_to_json(report);
  if (as_json) {
    write_output(json_text, out_path);
  } else {
    write_output(ssyn::summarize(report), out_path);
  }
  return 0;
}

int cmd_gen_sheet(const std::string& data_dir, const std::string& technique,
                  std::uint64_t seed, int samples,
                  const std::string& out_path) {
  const ssyn::BenchmarkStore store = ssyn::BenchmarkStore::load(data_dir);
  ssyn::RandD rand_d;
  ssyn::EditD edit_d;
  ssyn::EditEmbD edit_emb;
  ssyn::SymSS symss(store);
  const std::vector<ssyn::Technique*> all = {&rand_d, &edit_d, &edit_emb,
                                             &symss};
  ssyn::Technique* chosen = nullptr;
  for (ssyn::Technique* t : all) {
    if (t->name() == technique) chosen = t;
  }
  if (!chosen) throw std::runtime_error("unknown technique: " + technique);
  const ssyn::GenerativeOutput out =
      ssyn::run_generative(*chosen, store, seed, samples);
  write_output(ssyn::generative_to_json(out), out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"student attempt synthesis toolkit"};
  app.require_subcommand(1);

  std::string data_dir = default_data_dir();
  app.add_option("--data", data_dir, "data directory")
      ->envname("SSYN_DATA_DIR");
  bool as_json = false;
  app.add_flag("--json", as_json, "emit JSON output");

  // exec
  auto* exec = app.add_subcommand("exec", "run a code on a task");
  std::string task_path, code_path;
  bool trace = false;
  int max_steps = ssyn::kDefaultMaxSteps;
  exec->add_option("task", task_path, "task file")->required();
  exec->add_option("code", code_path, "code JSON file")->required();
  exec->add_flag("--trace", trace, "emit a JSON-lines execution trace");
  exec->add_option("--max-steps", max_steps, "step budget");

  // distance
  auto* distance = app.add_subcommand("distance",
                                      "tree edit distance between two codes");
  std::string code_a, code_b;
  distance->add_option("codeA", code_a, "code JSON file")->required();
  distance->add_option("codeB", code_b, "code JSON file")->required();

  // infer-type
  auto* infer = app.add_subcommand("infer-type",
                                   "infer the behavior type of an attempt");
  std::string ref_id, attempt_path;
  infer->add_option("--ref", ref_id, "reference task id")->required();
  infer->add_option("--attempt", attempt_path, "attempt JSON file")
      ->required();

  // synthesize
  auto* synth = app.add_subcommand("synthesize",
                                   "sample attempts for a behavior type");
  std::string target_id, type_id;
  int samples = 1000;
  std::uint64_t seed = 0;
  int top_k = 3;
  synth->add_option("--ref", ref_id, "reference task id")->required();
  synth->add_option("--target", target_id, "target task id")->required();
  synth->add_option("--type", type_id, "behavior type id")->required();
  synth->add_option("--samples", samples, "sample count");
  synth->add_option("--seed", seed, "random seed");
  synth->add_option("--top", top_k, "ranked codes to print");

  // gen-options
  auto* gen_options = app.add_subcommand(
      "gen-options", "build the ten-option instance for a scenario");
  std::string scenario_id;
  gen_options->add_option("--scenario", scenario_id, "scenario id")
      ->required();
  gen_options->add_option("--seed", seed, "random seed");

  // eval
  auto* eval = app.add_subcommand("eval", "run the discriminative protocol");
  ssyn::EvalConfig config;
  std::string emb_matrix, out_path, export_codes;
  eval->add_option("--rounds", config.rounds, "evaluation rounds");
  eval->add_option("--instances", config.instances_per_ref_task,
                   "instances per reference task per round");
  eval->add_option("--folds", config.folds, "cross-validation folds");
  eval->add_option("--seed", config.seed, "master seed");
  eval->add_option("--emb-matrix", emb_matrix,
                   "embedding distance matrix CSV for EditEmbD");
  eval->add_option("--out", out_path, "write the report to a file");
  eval->add_option("--export-codes", export_codes,
                   "write the code universe for this config and exit");

  // gen-sheet
  auto* gen_sheet = app.add_subcommand(
      "gen-sheet", "emit synthesized codes plus an empty rating sheet");
  std::string technique = "SymSS";
  gen_sheet->add_option("--technique", technique, "technique name");
  gen_sheet->add_option("--seed", seed, "random seed");
  gen_sheet->add_option("--samples", samples, "sample count per scenario");
  gen_sheet->add_option("--out", out_path, "write the sheet to a file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (exec->parsed()) {
      return cmd_exec(task_path, code_path, trace, as_json, max_steps);
    }
    if (distance->parsed()) return cmd_distance(code_a, code_b, as_json);
    if (infer->parsed()) {
      return cmd_infer(data_dir, ref_id, attempt_path, as_json);
    }
    if (synth->parsed()) {
      return cmd_synthesize(data_dir, ref_id, target_id, type_id, samples,
                            seed, top_k, as_json);
    }
    if (gen_options->parsed()) {
      return cmd_gen_options(data_dir, scenario_id, seed, as_json);
    }
    if (eval->parsed()) {
      return cmd_eval(data_dir, config, emb_matrix, out_path, export_codes,
                      as_json);
    }
    if (gen_sheet->parsed()) {
      return cmd_gen_sheet(data_dir, technique, seed, samples, out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
