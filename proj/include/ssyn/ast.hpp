#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace ssyn {

enum class ActionKind { Move, TurnLeft, TurnRight };
enum class CondKind { PathAhead, PathLeft, PathRight };

const std::string& action_name(ActionKind k);   // "move", "turnLeft", ...
const std::string& cond_name(CondKind c);       // "pathAhead", ...

struct Stmt;
using StmtList = std::vector<Stmt>;

struct Action {
  ActionKind kind;
};

struct RepeatUntilGoal {
  StmtList body;  // nonempty
};

struct IfElse {
  CondKind cond;
  StmtList then_body;  // nonempty
  StmtList else_body;  // nonempty
};

// Conditional without an else branch. Not emitted by any grammar here, but
// required so every benchmark option code is representable.
struct IfOnly {
  CondKind cond;
  StmtList then_body;  // nonempty
};

struct Stmt {
  std::variant<Action, RepeatUntilGoal, IfElse, IfOnly> node;
};

struct ProgramAst {
  StmtList body;  // may be empty
};

bool operator==(const Stmt& a, const Stmt& b);
inline bool operator!=(const Stmt& a, const Stmt& b) { return !(a == b); }
bool operator==(const ProgramAst& a, const ProgramAst& b);
inline bool operator!=(const ProgramAst& a, const ProgramAst& b) {
  return !(a == b);
}

inline Stmt make_action(ActionKind k) { return Stmt{Action{k}}; }
inline Stmt make_move() { return make_action(ActionKind::Move); }
inline Stmt make_turn_left() { return make_action(ActionKind::TurnLeft); }
inline Stmt make_turn_right() { return make_action(ActionKind::TurnRight); }
inline Stmt make_repeat(StmtList body) {
  return Stmt{RepeatUntilGoal{std::move(body)}};
}
inline Stmt make_if_else(CondKind c, StmtList then_body, StmtList else_body) {
  return Stmt{IfElse{c, std::move(then_body), std::move(else_body)}};
}
inline Stmt make_if(CondKind c, StmtList then_body) {
  return Stmt{IfOnly{c, std::move(then_body)}};
}

struct CodeAttributes {
  std::set<std::string> blocks;  // store-level block names, e.g. "IfElse(pathLeft)"
  int size = 0;                  // non-Run node count; each construct counts once
  int depth = 0;                 // AST depth; depth(Run{move}) == 1
};

CodeAttributes code_attributes(const ProgramAst& ast);

// Store-level name of a single block: actions keep their action name,
// RepeatUntilGoal is "RepeatUntil(goal)", and both conditional forms map to
// the family name "IfElse(<cond>)".
std::string block_store_name(const Stmt& stmt);

// Nesting structure of constructs with all actions stripped.
struct SkeletonNode {
  std::string kind;  // "run", "repeat_until_goal", "if_else", "if"
  std::vector<SkeletonNode> children;
};

bool operator==(const SkeletonNode& a, const SkeletonNode& b);

SkeletonNode construct_skeleton(const ProgramAst& ast);

// Compact one-line rendering, e.g. "run(repeat_until_goal(if_else))".
std::string skeleton_to_string(const SkeletonNode& node);

}  // namespace ssyn
