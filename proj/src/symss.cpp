#include "ssyn/symss.hpp"

#include <algorithm>
#include <stdexcept>

#include "ssyn/code_json.hpp"
#include "ssyn/grammar_templates.hpp"
#include "ssyn/tokens.hpp"

namespace ssyn {

GrammarCreator::GrammarCreator(std::string reference_task_id,
                               const BehaviorRegistry& registry)
    : reference_task_id_(std::move(reference_task_id)),
      types_(registry.types_for(reference_task_id_)),
      noise_(registry.noise_tail()) {}

Pcfg GrammarCreator::create_grammar(const MazeTask& task,
                                    const ProgramAst& solution,
                                    const std::string& type_id) const {
  const Validity v = is_valid_solution(task, solution);
  if (!v.ok) {
    throw std::invalid_argument("solution rejected for task '" + task.id +
                                "': " + v.reason);
  }
  for (const BehaviorType& t : types_) {
    if (t.id == type_id) return build_type_grammar(task, solution, t, noise_);
  }
  throw std::invalid_argument("behavior type '" + type_id +
                              "' is not registered for " +
                              reference_task_id_);
}

const CnfPcfg& GrammarCreator::cnf_grammar(const MazeTask& task,
                                           const ProgramAst& solution,
                                           const std::string& type_id) const {
  const std::string key =
      task.id + "\x1f" + serialize_code(solution) + "\x1f" + type_id;
  auto it = cnf_cache_.find(key);
  if (it == cnf_cache_.end()) {
    auto cnf = std::make_shared<CnfPcfg>(
        to_cnf(create_grammar(task, solution, type_id)));
    it = cnf_cache_.emplace(key, std::move(cnf)).first;
  }
  return *it->second;
}

std::optional<double> GrammarCreator::log_likelihood(
    const MazeTask& task, const ProgramAst& solution,
    const std::string& type_id, const ProgramAst& attempt) const {
  const CnfPcfg& g = cnf_grammar(task, solution, type_id);
  const std::vector<std::string> tokens = tokenize(attempt);
  if (tokens.empty()) return std::nullopt;
  for (const std::string& t : tokens) {
    if (!g.terminals.count(t)) return std::nullopt;
  }
  return log_inside_probability(g, tokens);
}

double GrammarCreator::likelihood(const MazeTask& task,
                                  const ProgramAst& solution,
                                  const std::string& type_id,
                                  const ProgramAst& attempt) const {
  const auto lp = log_likelihood(task, solution, type_id, attempt);
  return lp ? std::exp(*lp) : 0.0;
}

InferenceResult GrammarCreator::infer_type(const MazeTask& task,
                                           const ProgramAst& solution,
                                           const ProgramAst& attempt) const {
  InferenceResult result;
  std::optional<double> best;
  for (const BehaviorType& t : types_) {
    const auto lp = log_likelihood(task, solution, t.id, attempt);
    result.scores.push_back({t.id, lp});
    if (lp && (!best || *lp > *best)) {
      best = *lp;
      result.type_id = t.id;
    }
  }
  return result;
}

std::vector<SynthesizedCode> GrammarCreator::synthesize_attempt(
    const MazeTask& task, const ProgramAst& solution,
    const std::string& type_id, RngStream& rng, int sample_count) const {
  if (sample_count <= 0) {
    throw std::invalid_argument("sample count must be positive");
  }
  const Pcfg g = create_grammar(task, solution, type_id);

  struct Entry {
    ProgramAst code;
    double score;
    std::string key;
  };
  std::map<std::string, std::size_t> index;
  std::vector<Entry> entries;
  for (int i = 0; i < sample_count; ++i) {
    SampleResult s;
    for (int attempt_no = 0; attempt_no < kSampleRetries; ++attempt_no) {
      s = sample(g, rng, kSampleMaxDepth);
      if (s.ok) break;
    }
    if (!s.ok) continue;
    ProgramAst code = detokenize(s.tokens);
    const double score =
        normalized_score(s.derivation_probability, s.rule_count);
    const std::string key = serialize_code(code);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, entries.size());
      entries.push_back({std::move(code), score, key});
    } else if (score > entries[it->second].score) {
      // same yield reached through a likelier derivation
      entries[it->second].score = score;
    }
  }
  if (entries.empty()) {
    throw std::runtime_error(
        "sampling produced no code within the depth budget");
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.key < b.key;
  });
  std::vector<SynthesizedCode> out;
  out.reserve(entries.size());
  for (Entry& e : entries) {
    out.push_back({std::move(e.code), e.score});
  }
  return out;
}

}  // namespace ssyn
