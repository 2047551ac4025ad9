#pragma once

#include <set>
#include <string>
#include <vector>

#include "ssyn/ast.hpp"

namespace ssyn {

enum class Cell { Free, Wall, Goal };
enum class Dir { North, East, South, West };

const std::string& dir_name(Dir d);
Dir turn_left(Dir d);
Dir turn_right(Dir d);

struct Pos {
  int row = 0;
  int col = 0;
  bool operator==(const Pos&) const = default;
};

struct MazeTask {
  std::string id;
  std::vector<std::vector<Cell>> grid;  // rectangular, row-major
  Pos avatar_pos;
  Dir avatar_dir = Dir::East;
  std::set<std::string> store;  // block names, e.g. "IfElse(pathLeft)"
  int size_threshold = 0;       // positive

  int rows() const { return static_cast<int>(grid.size()); }
  int cols() const {
    return grid.empty() ? 0 : static_cast<int>(grid.front().size());
  }
  bool in_bounds(Pos p) const {
    return p.row >= 0 && p.row < rows() && p.col >= 0 && p.col < cols();
  }
  Cell cell(Pos p) const { return grid[p.row][p.col]; }
  Pos goal() const;
};

// Known block vocabulary of the DSL, for store validation.
const std::set<std::string>& full_block_vocabulary();

// ASCII format: header lines "id:", "store:" (comma list), "max_blocks:",
// then one row per line with '#' wall, '.' free, '*' goal and one of
// '^ > v <' marking the avatar's start cell and direction.
MazeTask parse_task(const std::string& text);
std::string serialize_task(const MazeTask& task);
MazeTask load_task(const std::string& path);

struct Validity {
  bool ok = false;
  std::string reason;  // empty when ok; first violated clause otherwise
};

// Solution: store-valid, solves the puzzle, within the size threshold.
Validity is_valid_solution(const MazeTask& task, const ProgramAst& code);

// Attempt: store-valid only; the size threshold does not apply.
Validity is_valid_attempt(const MazeTask& task, const ProgramAst& code);

// Same store and same construct skeleton of the two solutions.
bool is_similar_task(const MazeTask& reference, const ProgramAst& ref_solution,
                     const MazeTask& candidate, const ProgramAst& cand_solution);

}  // namespace ssyn
