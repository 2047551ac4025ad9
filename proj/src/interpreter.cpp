#include "ssyn/interpreter.hpp"

#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ssyn {

const std::string& exec_status_name(ExecStatus s) {
  static const std::string names[] = {"solved", "crashed", "timeout",
                                      "finished_not_on_goal"};
  return names[static_cast<int>(s)];
}

namespace {

Pos step_from(Pos p, Dir d) {
  switch (d) {
    case Dir::North: return {p.row - 1, p.col};
    case Dir::East: return {p.row, p.col + 1};
    case Dir::South: return {p.row + 1, p.col};
    case Dir::West: return {p.row, p.col - 1};
  }
  return p;
}

// Execution state shared across the recursive statement walk. Control flow
// stops (solved/crashed/timeout) are signalled through `finished`.
struct ExecState {
  const MazeTask& task;
  int max_steps;
  bool with_trace;

  Pos pos;
  Dir dir;
  int steps = 0;
  bool finished = false;
  ExecStatus status = ExecStatus::FinishedNotOnGoal;
  std::vector<TraceEntry> trace;

  bool on_goal() const { return task.cell(pos) == Cell::Goal; }

  void record(const std::string& action) {
    if (with_trace) trace.push_back({steps, pos, dir, action});
  }

  // Returns false when the step budget is exhausted.
  bool charge_step() {
    if (steps >= max_steps) {
      finished = true;
      status = ExecStatus::Timeout;
      return false;
    }
    ++steps;
    return true;
  }

  void run_body(const StmtList& body);
};

void ExecState::run_body(const StmtList& body) {
  for (const Stmt& s : body) {
    if (finished) return;
    if (const auto* a = std::get_if<Action>(&s.node)) {
      if (!charge_step()) return;
      switch (a->kind) {
        case ActionKind::Move: {
          const Pos next = step_from(pos, dir);
          if (!task.in_bounds(next) || task.cell(next) == Cell::Wall) {
            record("move:crash");
            finished = true;
            status = ExecStatus::Crashed;
            return;
          }
          pos = next;
          record("move");
          if (on_goal()) {
            finished = true;
            status = ExecStatus::Solved;
            return;
          }
          break;
        }
        case ActionKind::TurnLeft:
          dir = turn_left(dir);
          record("turnLeft");
          break;
        case ActionKind::TurnRight:
          dir = turn_right(dir);
          record("turnRight");
          break;
      }
    } else if (const auto* r = std::get_if<RepeatUntilGoal>(&s.node)) {
      while (true) {
        if (!charge_step()) return;  // goal re-check costs a step
        record("checkGoal");
        if (on_goal()) {
          finished = true;
          status = ExecStatus::Solved;
          return;
        }
        run_body(r->body);
        if (finished) return;
      }
    } else if (const auto* ie = std::get_if<IfElse>(&s.node)) {
      if (!charge_step()) return;
      const bool taken = eval_condition(task, pos, dir, ie->cond);
      record(std::string("check:") + cond_name(ie->cond) +
             (taken ? ":true" : ":false"));
      run_body(taken ? ie->then_body : ie->else_body);
      if (finished) return;
    } else {
      const auto& io = std::get<IfOnly>(s.node);
      if (!charge_step()) return;
      const bool taken = eval_condition(task, pos, dir, io.cond);
      record(std::string("check:") + cond_name(io.cond) +
             (taken ? ":true" : ":false"));
      if (taken) {
        run_body(io.then_body);
        if (finished) return;
      }
    }
  }
}

}  // namespace

bool eval_condition(const MazeTask& task, Pos pos, Dir dir, CondKind cond) {
  Dir look = dir;
  switch (cond) {
    case CondKind::PathAhead: break;
    case CondKind::PathLeft: look = turn_left(dir); break;
    case CondKind::PathRight: look = turn_right(dir); break;
  }
  const Pos next = step_from(pos, look);
  return task.in_bounds(next) && task.cell(next) != Cell::Wall;
}

ExecOutcome execute(const MazeTask& task, const ProgramAst& code,
                    int max_steps, bool with_trace) {
  const Validity v = is_valid_attempt(task, code);
  if (!v.ok) {
    throw std::invalid_argument("attempt is not valid for task '" + task.id +
                                "': " + v.reason);
  }
  ExecState state{task, max_steps, with_trace, task.avatar_pos,
                  task.avatar_dir};
  state.run_body(code.body);
  ExecOutcome out;
  out.steps_used = state.steps;
  if (state.finished) {
    out.status = state.status;
  } else {
    out.status = state.on_goal() ? ExecStatus::Solved
                                 : ExecStatus::FinishedNotOnGoal;
  }
  if (with_trace) out.trace = std::move(state.trace);
  return out;
}

std::string trace_to_json_lines(const std::vector<TraceEntry>& trace) {
  std::ostringstream out;
  for (const TraceEntry& e : trace) {
    nlohmann::ordered_json j;
    j["step"] = e.step;
    j["row"] = e.pos.row;
    j["col"] = e.pos.col;
    j["dir"] = dir_name(e.dir);
    j["action"] = e.action;
    out << j.dump() << "\n";
  }
  return out.str();
}

}  // namespace ssyn
