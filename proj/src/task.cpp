#include "ssyn/task.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ssyn/interpreter.hpp"

namespace ssyn {

const std::string& dir_name(Dir d) {
  static const std::string names[] = {"north", "east", "south", "west"};
  return names[static_cast<int>(d)];
}

Dir turn_left(Dir d) {
  return static_cast<Dir>((static_cast<int>(d) + 3) % 4);
}

Dir turn_right(Dir d) {
  return static_cast<Dir>((static_cast<int>(d) + 1) % 4);
}

Pos MazeTask::goal() const {
  for (int r = 0; r < rows(); ++r) {
    for (int c = 0; c < cols(); ++c) {
      if (grid[r][c] == Cell::Goal) return Pos{r, c};
    }
  }
  throw std::logic_error("task has no goal cell");
}

const std::set<std::string>& full_block_vocabulary() {
  static const std::set<std::string> vocab = {
      "move",
      "turnLeft",
      "turnRight",
      "RepeatUntil(goal)",
      "IfElse(pathAhead)",
      "IfElse(pathLeft)",
      "IfElse(pathRight)",
  };
  return vocab;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

char avatar_char(Dir d) {
  switch (d) {
    case Dir::North: return '^';
    case Dir::East: return '>';
    case Dir::South: return 'v';
    case Dir::West: return '<';
  }
  return '>';
}

}  // namespace

MazeTask parse_task(const std::string& text) {
  MazeTask task;
  std::istringstream in(text);
  std::string line;
  bool have_id = false, have_store = false, have_size = false;
  int goal_count = 0, avatar_count = 0;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("id:", 0) == 0) {
      task.id = trim(line.substr(3));
      have_id = true;
    } else if (line.rfind("store:", 0) == 0) {
      for (const std::string& name : split_csv(line.substr(6))) {
        if (!full_block_vocabulary().count(name)) {
          throw std::runtime_error("unknown store block '" + name + "'");
        }
        task.store.insert(name);
      }
      have_store = true;
    } else if (line.rfind("max_blocks:", 0) == 0) {
      task.size_threshold = std::stoi(trim(line.substr(11)));
      if (task.size_threshold <= 0) {
        throw std::runtime_error("max_blocks must be positive");
      }
      have_size = true;
    } else {
      std::vector<Cell> row;
      for (char ch : line) {
        const int r = static_cast<int>(task.grid.size());
        const int c = static_cast<int>(row.size());
        switch (ch) {
          case '#': row.push_back(Cell::Wall); break;
          case '.': row.push_back(Cell::Free); break;
          case '*':
            row.push_back(Cell::Goal);
            ++goal_count;
            break;
          case '^':
          case '>':
          case 'v':
          case '<': {
            row.push_back(Cell::Free);
            task.avatar_pos = Pos{r, c};
            task.avatar_dir = ch == '^'   ? Dir::North
                              : ch == '>' ? Dir::East
                              : ch == 'v' ? Dir::South
                                          : Dir::West;
            ++avatar_count;
            break;
          }
          default:
            throw std::runtime_error(std::string("unknown grid character '") +
                                     ch + "'");
        }
      }
      if (!task.grid.empty() && row.size() != task.grid.front().size()) {
        throw std::runtime_error("ragged grid rows");
      }
      task.grid.push_back(std::move(row));
    }
  }
  if (!have_id) throw std::runtime_error("missing id: header");
  if (!have_store) throw std::runtime_error("missing store: header");
  if (!have_size) throw std::runtime_error("missing max_blocks: header");
  if (task.grid.empty()) throw std::runtime_error("missing grid");
  if (goal_count == 0) throw std::runtime_error("no goal cell");
  if (goal_count > 1) throw std::runtime_error("multiple goals");
  if (avatar_count == 0) throw std::runtime_error("no avatar cell");
  if (avatar_count > 1) throw std::runtime_error("multiple avatars");
  return task;
}

std::string serialize_task(const MazeTask& task) {
  std::ostringstream out;
  out << "id: " << task.id << "\n";
  out << "store: ";
  bool first = true;
  for (const std::string& name : task.store) {
    if (!first) out << ", ";
    out << name;
    first = false;
  }
  out << "\n";
  out << "max_blocks: " << task.size_threshold << "\n";
  for (int r = 0; r < task.rows(); ++r) {
    for (int c = 0; c < task.cols(); ++c) {
      if (task.avatar_pos == Pos{r, c}) {
        out << avatar_char(task.avatar_dir);
      } else {
        switch (task.grid[r][c]) {
          case Cell::Wall: out << '#'; break;
          case Cell::Free: out << '.'; break;
          case Cell::Goal: out << '*'; break;
        }
      }
    }
    out << "\n";
  }
  return out.str();
}

MazeTask load_task(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open task file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_task(buf.str());
}

Validity is_valid_attempt(const MazeTask& task, const ProgramAst& code) {
  const CodeAttributes attrs = code_attributes(code);
  for (const std::string& block : attrs.blocks) {
    if (!task.store.count(block)) {
      return {false, "block not in store: " + block};
    }
  }
  return {true, ""};
}

Validity is_valid_solution(const MazeTask& task, const ProgramAst& code) {
  Validity attempt = is_valid_attempt(task, code);
  if (!attempt.ok) return attempt;
  const ExecOutcome outcome = execute(task, code);
  if (outcome.status != ExecStatus::Solved) {
    return {false, "not solved: " + exec_status_name(outcome.status)};
  }
  const CodeAttributes attrs = code_attributes(code);
  if (attrs.size > task.size_threshold) {
    return {false, "size threshold exceeded: " + std::to_string(attrs.size) +
                       " > " + std::to_string(task.size_threshold)};
  }
  return {true, ""};
}

bool is_similar_task(const MazeTask& reference, const ProgramAst& ref_solution,
                     const MazeTask& candidate,
                     const ProgramAst& cand_solution) {
  if (reference.store != candidate.store) return false;
  return construct_skeleton(ref_solution) == construct_skeleton(cand_solution);
}

}  // namespace ssyn
