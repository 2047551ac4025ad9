#include "doctest.h"

#include <fstream>
#include <sstream>

#include "ssyn/code_json.hpp"
#include "ssyn/interpreter.hpp"
#include "ssyn/task.hpp"

using namespace ssyn;

namespace {

MazeTask corridor(const std::string& row) {
  return parse_task("id: c\nstore: move, turnLeft, turnRight\n"
                    "max_blocks: 9\n" + row + "\n");
}

std::string data_path(const std::string& rel) {
  return std::string(SSYN_DATA_DIR) + "/" + rel;
}

}  // namespace

TEST_CASE("walk a corridor") {
  const ProgramAst two_moves{{make_move(), make_move()}};
  const ExecOutcome ok = execute(corridor(">.*"), two_moves);
  CHECK(ok.status == ExecStatus::Solved);
  CHECK(ok.steps_used == 2);

  const ExecOutcome crash = execute(corridor(">.#"), two_moves);
  CHECK(crash.status == ExecStatus::Crashed);

  const ExecOutcome off = execute(corridor(">*."), two_moves);
  CHECK(off.status == ExecStatus::Solved);  // goal reached mid-program
  CHECK(off.steps_used == 1);

  const ExecOutcome shy = execute(corridor(">..*"), two_moves);
  CHECK(shy.status == ExecStatus::FinishedNotOnGoal);
}

TEST_CASE("condition evaluation") {
  const MazeTask t = parse_task(
      "id: c\nstore: move\nmax_blocks: 1\n####\n#>.#\n#.##\n####\n");
  // avatar at (1,1) facing east: ahead free, right free, left wall
  CHECK(eval_condition(t, t.avatar_pos, t.avatar_dir, CondKind::PathAhead));
  CHECK(eval_condition(t, t.avatar_pos, t.avatar_dir, CondKind::PathRight));
  CHECK_FALSE(eval_condition(t, t.avatar_pos, t.avatar_dir,
                             CondKind::PathLeft));
  // against the east wall at (1,2): ahead blocked
  CHECK_FALSE(eval_condition(t, Pos{1, 2}, Dir::East, CondKind::PathAhead));
  // boxed in on all relative sides
  CHECK_FALSE(eval_condition(t, Pos{2, 1}, Dir::South, CondKind::PathAhead));
  CHECK_FALSE(eval_condition(t, Pos{2, 1}, Dir::South, CondKind::PathLeft));
  CHECK_FALSE(eval_condition(t, Pos{2, 1}, Dir::South, CondKind::PathRight));
}

TEST_CASE("turning is a 4-cycle") {
  for (Dir d : {Dir::North, Dir::East, Dir::South, Dir::West}) {
    Dir left = d, right = d;
    for (int i = 0; i < 4; ++i) {
      left = turn_left(left);
      right = turn_right(right);
    }
    CHECK(left == d);
    CHECK(right == d);
    CHECK(turn_left(turn_right(d)) == d);
  }
}

TEST_CASE("loops that never reach the goal time out") {
  const MazeTask t = corridor(">..*");
  const ProgramAst spin{{make_repeat({make_turn_left()})}};
  const ExecOutcome out = execute(t, spin, 500);
  CHECK(out.status == ExecStatus::Timeout);
  CHECK(out.steps_used == 500);
}

TEST_CASE("store violations are rejected up front") {
  const MazeTask t = parse_task("id: c\nstore: move\nmax_blocks: 2\n>.*\n");
  CHECK_THROWS_AS(execute(t, ProgramAst{{make_turn_left()}}),
                  std::invalid_argument);
}

TEST_CASE("fixture solutions execute to solved") {
  for (const std::string& id :
       {"T4", "T4x", "T4y", "T4z", "T18", "T18x", "T18y", "T18z"}) {
    const MazeTask t = load_task(data_path("tasks/" + id + ".task"));
    const ProgramAst s =
        load_code_file(data_path("tasks/" + id + ".solution.json"));
    const ExecOutcome out = execute(t, s);
    CHECK_MESSAGE(out.status == ExecStatus::Solved, id);
  }
}

TEST_CASE("determinism, trace shape and early success in a loop body") {
  const MazeTask t18 = load_task(data_path("tasks/T18.task"));
  const ProgramAst s18 =
      load_code_file(data_path("tasks/T18.solution.json"));
  const ExecOutcome a = execute(t18, s18, kDefaultMaxSteps, true);
  const ExecOutcome b = execute(t18, s18, kDefaultMaxSteps, true);
  CHECK(a.status == ExecStatus::Solved);
  CHECK(a.steps_used == b.steps_used);
  REQUIRE(a.trace.has_value());
  REQUIRE(b.trace.has_value());
  CHECK(a.trace->size() == b.trace->size());
  const std::string lines = trace_to_json_lines(*a.trace);
  CHECK(lines.find("\"dir\"") != std::string::npos);
  CHECK(lines.find("\"action\"") != std::string::npos);
}
