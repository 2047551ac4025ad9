#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ssyn/ast.hpp"
#include "ssyn/behavior.hpp"
#include "ssyn/pcfg.hpp"
#include "ssyn/rng.hpp"
#include "ssyn/task.hpp"

namespace ssyn {

struct TypeScore {
  std::string type_id;
  std::optional<double> log_likelihood;  // nullopt encodes probability zero
};

struct InferenceResult {
  std::optional<std::string> type_id;  // nullopt: undetermined (all zero)
  std::vector<TypeScore> scores;       // in registration order
};

struct SynthesizedCode {
  ProgramAst code;
  double score = 0.0;  // geometric-mean per-rule probability
};

// Per-reference-task creator of behavior-type grammars, with inference from
// an observed attempt and attempt synthesis on similar tasks.
class GrammarCreator {
 public:
  GrammarCreator(std::string reference_task_id, const BehaviorRegistry& registry);

  const std::string& reference_task_id() const { return reference_task_id_; }
  const std::vector<BehaviorType>& types() const { return types_; }

  // Grammar for one behavior type against a concrete (task, solution) pair;
  // the solution must be valid for the task and the type registered.
  Pcfg create_grammar(const MazeTask& task, const ProgramAst& solution,
                      const std::string& type_id) const;

  // p(attempt | type): inside probability of the attempt's token sequence
  // under the CNF form of the type grammar. Tokens outside the grammar's
  // terminals give probability zero.
  double likelihood(const MazeTask& task, const ProgramAst& solution,
                    const std::string& type_id,
                    const ProgramAst& attempt) const;
  std::optional<double> log_likelihood(const MazeTask& task,
                                       const ProgramAst& solution,
                                       const std::string& type_id,
                                       const ProgramAst& attempt) const;

  // Argmax of likelihood over the registered types; ties break toward the
  // earlier registered type; all-zero scores yield an undetermined result.
  InferenceResult infer_type(const MazeTask& task, const ProgramAst& solution,
                             const ProgramAst& attempt) const;

  // Samples `sample_count` codes from the type grammar, deduplicates them
  // structurally and ranks by normalized score (descending).
  std::vector<SynthesizedCode> synthesize_attempt(const MazeTask& task,
                                                  const ProgramAst& solution,
                                                  const std::string& type_id,
                                                  RngStream& rng,
                                                  int sample_count) const;

  // CNF grammars are memoized per (task, solution, type).
  const CnfPcfg& cnf_grammar(const MazeTask& task, const ProgramAst& solution,
                             const std::string& type_id) const;

 private:
  std::string reference_task_id_;
  std::vector<BehaviorType> types_;
  NoiseTail noise_;
  mutable std::map<std::string, std::shared_ptr<CnfPcfg>> cnf_cache_;
};

inline constexpr int kSampleMaxDepth = 50;
inline constexpr int kSampleRetries = 20;

}  // namespace ssyn
