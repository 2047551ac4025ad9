#pragma once

#include <map>
#include <string>
#include <vector>

#include "ssyn/ast.hpp"
#include "ssyn/behavior.hpp"
#include "ssyn/rng.hpp"
#include "ssyn/task.hpp"

namespace ssyn {

struct Scenario {
  std::string id;
  std::string reference_task_id;
  std::string target_task_id;
  std::string behavior_type_id;
  int student_index = 1;            // 1 or 2
  ProgramAst observed_attempt;      // submitted on the reference task
  ProgramAst ground_truth_attempt;  // withheld answer on the target task
};

inline constexpr std::size_t kOptionCount = 10;

struct DiscriminativeInstance {
  std::string scenario_id;
  std::string reference_task_id;
  std::string target_task_id;
  ProgramAst observed_attempt;
  std::vector<ProgramAst> options;  // exactly kOptionCount, pairwise distinct
  std::size_t answer_index = 0;     // hidden from techniques
};

// Tasks, solutions, behavior registry and the 72 benchmark scenarios.
class BenchmarkStore {
 public:
  // Loads from a data directory; enforces the 2 x 3 x 6 x 2 scenario grid
  // and the per-scenario invariants (task similarity, store validity).
  static BenchmarkStore load(const std::string& data_dir);

  const MazeTask& task(const std::string& id) const;
  const ProgramAst& solution(const std::string& id) const;
  const BehaviorRegistry& registry() const { return registry_; }
  const std::vector<Scenario>& scenarios() const { return scenarios_; }
  const Scenario& scenario(const std::string& id) const;
  std::vector<const Scenario*> scenarios_for_reference(
      const std::string& reference_task_id) const;
  const std::vector<std::string>& reference_task_ids() const {
    return reference_ids_;
  }
  const std::vector<std::string>& targets_of(const std::string& ref_id) const;

  const Scenario& find_scenario(const std::string& reference_task_id,
                                const std::string& target_task_id,
                                const std::string& type_id,
                                int student_index) const;

 private:
  std::map<std::string, MazeTask> tasks_;
  std::map<std::string, ProgramAst> solutions_;
  BehaviorRegistry registry_;
  std::vector<Scenario> scenarios_;
  std::vector<std::string> reference_ids_;
  std::map<std::string, std::vector<std::string>> targets_;
};

// k mutations (insert/delete/relabel action, swap turn direction) applied to
// the solution; the result is store-valid and distinct from the solution.
ProgramAst random_edit(const ProgramAst& solution, const MazeTask& task,
                       RngStream& rng, int k);

// Ten options: the ground truth, the target solution, one attempt from each
// of the five other behavior types (student picked by rng) and three random
// solution edits, shuffled; pairwise structurally distinct.
DiscriminativeInstance make_options(const Scenario& scenario,
                                    const BenchmarkStore& store,
                                    RngStream& rng);

}  // namespace ssyn
