#include "ssyn/benchmark.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "ssyn/code_json.hpp"

namespace ssyn {

namespace {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace

BenchmarkStore BenchmarkStore::load(const std::string& data_dir) {
  BenchmarkStore store;
  store.registry_ = BehaviorRegistry::load(data_dir + "/behavior_types.json");

  const nlohmann::json manifest =
      read_json_file(data_dir + "/benchmark/benchmark.json");

  for (const auto& ref : manifest.at("reference_tasks")) {
    const std::string ref_id = ref.at("id").get<std::string>();
    store.reference_ids_.push_back(ref_id);
    std::vector<std::string> targets;
    for (const auto& t : ref.at("targets")) {
      targets.push_back(t.get<std::string>());
    }
    store.targets_[ref_id] = std::move(targets);
  }

  auto load_task_bundle = [&](const std::string& id) {
    if (store.tasks_.count(id)) return;
    store.tasks_.emplace(id, load_task(data_dir + "/tasks/" + id + ".task"));
    store.solutions_.emplace(
        id, load_code_file(data_dir + "/tasks/" + id + ".solution.json"));
  };
  for (const auto& [ref_id, targets] : store.targets_) {
    load_task_bundle(ref_id);
    for (const std::string& t : targets) load_task_bundle(t);
  }

  for (const auto& entry : manifest.at("scenarios")) {
    const std::string path = data_dir + "/benchmark/" +
                             entry.get<std::string>();
    const nlohmann::json j = read_json_file(path);
    Scenario s;
    s.id = j.at("id").get<std::string>();
    s.reference_task_id = j.at("reference_task").get<std::string>();
    s.target_task_id = j.at("target_task").get<std::string>();
    s.behavior_type_id = j.at("behavior_type").get<std::string>();
    s.student_index = j.at("student").get<int>();
    s.observed_attempt = parse_code(j.at("observed_attempt").dump());
    s.ground_truth_attempt = parse_code(j.at("ground_truth_attempt").dump());
    store.scenarios_.push_back(std::move(s));
  }

  // Grid completeness: every (reference, target, type, student) cell once.
  std::size_t expected = 0;
  for (const std::string& ref_id : store.reference_ids_) {
    const auto& targets = store.targets_.at(ref_id);
    const auto& types = store.registry_.types_for(ref_id);
    for (const std::string& tar : targets) {
      for (const BehaviorType& type : types) {
        for (int student = 1; student <= 2; ++student) {
          ++expected;
          const auto hit = std::count_if(
              store.scenarios_.begin(), store.scenarios_.end(),
              [&](const Scenario& s) {
                return s.reference_task_id == ref_id &&
                       s.target_task_id == tar &&
                       s.behavior_type_id == type.id &&
                       s.student_index == student;
              });
          if (hit == 0) {
            throw std::runtime_error("missing scenario (" + ref_id + ", " +
                                     tar + ", " + type.id + ", s" +
                                     std::to_string(student) + ")");
          }
          if (hit > 1) {
            throw std::runtime_error("duplicate scenario (" + ref_id + ", " +
                                     tar + ", " + type.id + ", s" +
                                     std::to_string(student) + ")");
          }
        }
      }
    }
  }
  if (store.scenarios_.size() != expected) {
    throw std::runtime_error("scenario count mismatch: " +
                             std::to_string(store.scenarios_.size()) +
                             " loaded, " + std::to_string(expected) +
                             " expected");
  }

  for (const Scenario& s : store.scenarios_) {
    const MazeTask& ref = store.task(s.reference_task_id);
    const MazeTask& tar = store.task(s.target_task_id);
    if (!is_similar_task(ref, store.solution(s.reference_task_id), tar,
                         store.solution(s.target_task_id))) {
      throw std::runtime_error("scenario " + s.id +
                               ": tasks are not similar");
    }
    const Validity obs = is_valid_attempt(ref, s.observed_attempt);
    if (!obs.ok) {
      throw std::runtime_error("scenario " + s.id + ": observed attempt: " +
                               obs.reason);
    }
    const Validity gt = is_valid_attempt(tar, s.ground_truth_attempt);
    if (!gt.ok) {
      throw std::runtime_error("scenario " + s.id +
                               ": ground-truth attempt: " + gt.reason);
    }
    if (s.ground_truth_attempt == store.solution(s.target_task_id)) {
      throw std::runtime_error("scenario " + s.id +
                               ": ground truth equals the target solution");
    }
  }
  return store;
}

const MazeTask& BenchmarkStore::task(const std::string& id) const {
  const auto it = tasks_.find(id);
  if (it == tasks_.end()) throw std::out_of_range("unknown task: " + id);
  return it->second;
}

const ProgramAst& BenchmarkStore::solution(const std::string& id) const {
  const auto it = solutions_.find(id);
  if (it == solutions_.end()) {
    throw std::out_of_range("unknown solution: " + id);
  }
  return it->second;
}

const Scenario& BenchmarkStore::scenario(const std::string& id) const {
  for (const Scenario& s : scenarios_) {
    if (s.id == id) return s;
  }
  throw std::out_of_range("unknown scenario: " + id);
}

std::vector<const Scenario*> BenchmarkStore::scenarios_for_reference(
    const std::string& reference_task_id) const {
  std::vector<const Scenario*> out;
  for (const Scenario& s : scenarios_) {
    if (s.reference_task_id == reference_task_id) out.push_back(&s);
  }
  return out;
}

const std::vector<std::string>& BenchmarkStore::targets_of(
    const std::string& ref_id) const {
  const auto it = targets_.find(ref_id);
  if (it == targets_.end()) {
    throw std::out_of_range("unknown reference task: " + ref_id);
  }
  return it->second;
}

const Scenario& BenchmarkStore::find_scenario(
    const std::string& reference_task_id, const std::string& target_task_id,
    const std::string& type_id, int student_index) const {
  for (const Scenario& s : scenarios_) {
    if (s.reference_task_id == reference_task_id &&
        s.target_task_id == target_task_id &&
        s.behavior_type_id == type_id && s.student_index == student_index) {
      return s;
    }
  }
  throw std::out_of_range("no scenario for (" + reference_task_id + ", " +
                          target_task_id + ", " + type_id + ", s" +
                          std::to_string(student_index) + ")");
}

namespace {

std::vector<ActionKind> store_actions(const MazeTask& task) {
  std::vector<ActionKind> out;
  if (task.store.count("move")) out.push_back(ActionKind::Move);
  if (task.store.count("turnLeft")) out.push_back(ActionKind::TurnLeft);
  if (task.store.count("turnRight")) out.push_back(ActionKind::TurnRight);
  return out;
}

void collect_bodies(StmtList& body, bool is_construct_body,
                    std::vector<std::pair<StmtList*, bool>>& out) {
  out.push_back({&body, is_construct_body});
  for (Stmt& s : body) {
    if (auto* r = std::get_if<RepeatUntilGoal>(&s.node)) {
      collect_bodies(r->body, true, out);
    } else if (auto* ie = std::get_if<IfElse>(&s.node)) {
      collect_bodies(ie->then_body, true, out);
      collect_bodies(ie->else_body, true, out);
    } else if (auto* io = std::get_if<IfOnly>(&s.node)) {
      collect_bodies(io->then_body, true, out);
    }
  }
}

void mutate_once(ProgramAst& code, const std::vector<ActionKind>& actions,
                 RngStream& rng) {
  std::vector<std::pair<StmtList*, bool>> bodies;
  collect_bodies(code.body, false, bodies);

  struct ActionRef {
    StmtList* list;
    std::size_t index;
    bool deletable;
  };
  std::vector<ActionRef> action_refs;
  std::vector<ActionRef> turn_refs;
  for (auto& [list, construct] : bodies) {
    for (std::size_t i = 0; i < list->size(); ++i) {
      if (auto* a = std::get_if<Action>(&(*list)[i].node)) {
        const bool deletable = !construct || list->size() >= 2;
        action_refs.push_back({list, i, deletable});
        if (a->kind != ActionKind::Move) turn_refs.push_back({list, i, false});
      }
    }
  }

  enum Mutation { Insert, Delete, Relabel, SwapTurn };
  std::vector<Mutation> feasible = {Insert};
  if (std::any_of(action_refs.begin(), action_refs.end(),
                  [](const ActionRef& r) { return r.deletable; })) {
    feasible.push_back(Delete);
  }
  if (!action_refs.empty() && actions.size() >= 2) {
    feasible.push_back(Relabel);
  }
  if (!turn_refs.empty()) feasible.push_back(SwapTurn);

  switch (feasible[rng.uniform_int(feasible.size())]) {
    case Insert: {
      auto& [list, _] = bodies[rng.uniform_int(bodies.size())];
      const std::size_t at = rng.uniform_int(list->size() + 1);
      list->insert(list->begin() + static_cast<long>(at),
                   make_action(actions[rng.uniform_int(actions.size())]));
      break;
    }
    case Delete: {
      std::vector<ActionRef> deletable;
      for (const ActionRef& r : action_refs) {
        if (r.deletable) deletable.push_back(r);
      }
      const ActionRef& r = deletable[rng.uniform_int(deletable.size())];
      r.list->erase(r.list->begin() + static_cast<long>(r.index));
      break;
    }
    case Relabel: {
      const ActionRef& r = action_refs[rng.uniform_int(action_refs.size())];
      auto& node = std::get<Action>((*r.list)[r.index].node);
      ActionKind next;
      do {
        next = actions[rng.uniform_int(actions.size())];
      } while (next == node.kind);
      node.kind = next;
      break;
    }
    case SwapTurn: {
      const ActionRef& r = turn_refs[rng.uniform_int(turn_refs.size())];
      auto& node = std::get<Action>((*r.list)[r.index].node);
      node.kind = node.kind == ActionKind::TurnLeft ? ActionKind::TurnRight
                                                    : ActionKind::TurnLeft;
      break;
    }
  }
}

constexpr int kEditRetries = 64;

}  // namespace

ProgramAst random_edit(const ProgramAst& solution, const MazeTask& task,
                       RngStream& rng, int k) {
  if (k < 1) throw std::invalid_argument("edit count must be >= 1");
  const std::vector<ActionKind> actions = store_actions(task);
  if (actions.empty()) {
    throw std::invalid_argument("task store has no action blocks");
  }
  for (int round = 0; round < kEditRetries; ++round) {
    ProgramAst out = solution;
    for (int i = 0; i < k; ++i) mutate_once(out, actions, rng);
    if (out != solution) return out;
  }
  throw std::runtime_error("random edit kept collapsing to the solution");
}

DiscriminativeInstance make_options(const Scenario& scenario,
                                    const BenchmarkStore& store,
                                    RngStream& rng) {
  const MazeTask& target = store.task(scenario.target_task_id);
  const ProgramAst& target_solution = store.solution(scenario.target_task_id);

  std::vector<ProgramAst> options;
  auto contains = [&](const ProgramAst& code) {
    return std::any_of(options.begin(), options.end(),
                       [&](const ProgramAst& o) { return o == code; });
  };

  options.push_back(scenario.ground_truth_attempt);
  if (contains(target_solution)) {
    throw std::runtime_error("ground truth equals the target solution");
  }
  options.push_back(target_solution);

  for (const BehaviorType& type :
       store.registry().types_for(scenario.reference_task_id)) {
    if (type.id == scenario.behavior_type_id) continue;
    const int first = rng.uniform_int(2) == 0 ? 1 : 2;
    const int second = first == 1 ? 2 : 1;
    const ProgramAst* pick = nullptr;
    for (int student : {first, second}) {
      const Scenario& other = store.find_scenario(
          scenario.reference_task_id, scenario.target_task_id, type.id,
          student);
      if (!contains(other.ground_truth_attempt)) {
        pick = &other.ground_truth_attempt;
        break;
      }
    }
    if (!pick) {
      throw std::runtime_error(
          "cannot assemble distinct options: both attempts of type " +
          type.id + " collide for scenario " + scenario.id);
    }
    options.push_back(*pick);
  }

  for (int i = 0; i < 3; ++i) {
    ProgramAst edited;
    bool placed = false;
    for (int round = 0; round < kEditRetries; ++round) {
      const int k = 1 + static_cast<int>(rng.uniform_int(3));
      edited = random_edit(target_solution, target, rng, k);
      if (!contains(edited)) {
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw std::runtime_error(
          "cannot generate a distinct random edit for scenario " +
          scenario.id);
    }
    options.push_back(edited);
  }

  // Fisher-Yates shuffle with the caller's stream.
  for (std::size_t i = options.size() - 1; i > 0; --i) {
    const std::size_t j = rng.uniform_int(i + 1);
    std::swap(options[i], options[j]);
  }

  DiscriminativeInstance inst;
  inst.scenario_id = scenario.id;
  inst.reference_task_id = scenario.reference_task_id;
  inst.target_task_id = scenario.target_task_id;
  inst.observed_attempt = scenario.observed_attempt;
  inst.options = std::move(options);
  for (std::size_t i = 0; i < inst.options.size(); ++i) {
    if (inst.options[i] == scenario.ground_truth_attempt) {
      inst.answer_index = i;
      break;
    }
  }
  return inst;
}

}  // namespace ssyn
