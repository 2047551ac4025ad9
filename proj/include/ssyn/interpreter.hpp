#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ssyn/ast.hpp"
#include "ssyn/task.hpp"

namespace ssyn {

enum class ExecStatus { Solved, Crashed, Timeout, FinishedNotOnGoal };

const std::string& exec_status_name(ExecStatus s);

struct TraceEntry {
  int step = 0;
  Pos pos;
  Dir dir = Dir::East;
  std::string action;
};

struct ExecOutcome {
  ExecStatus status = ExecStatus::FinishedNotOnGoal;
  int steps_used = 0;
  std::optional<std::vector<TraceEntry>> trace;
};

inline constexpr int kDefaultMaxSteps = 1000;

// Runs the program on the task. Execution halts with Solved the moment the
// avatar occupies the goal cell, including mid-body; a move into a wall or
// off-grid crashes; moves, turns and every condition evaluation (including
// the loop's goal check) count toward max_steps.
//
// Requires is_valid_attempt(task, code); throws std::invalid_argument
// otherwise.
ExecOutcome execute(const MazeTask& task, const ProgramAst& code,
                    int max_steps = kDefaultMaxSteps, bool with_trace = false);

// True iff the adjacent cell in the avatar-relative direction is inside the
// grid and not a wall.
bool eval_condition(const MazeTask& task, Pos pos, Dir dir, CondKind cond);

std::string trace_to_json_lines(const std::vector<TraceEntry>& trace);

}  // namespace ssyn
