#include "ssyn/ast.hpp"

#include <algorithm>

namespace ssyn {

const std::string& action_name(ActionKind k) {
  static const std::string names[] = {"move", "turnLeft", "turnRight"};
  return names[static_cast<int>(k)];
}

const std::string& cond_name(CondKind c) {
  static const std::string names[] = {"pathAhead", "pathLeft", "pathRight"};
  return names[static_cast<int>(c)];
}

bool operator==(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* x = std::get_if<Action>(&a.node)) {
    return x->kind == std::get<Action>(b.node).kind;
  }
  if (const auto* x = std::get_if<RepeatUntilGoal>(&a.node)) {
    return x->body == std::get<RepeatUntilGoal>(b.node).body;
  }
  if (const auto* x = std::get_if<IfElse>(&a.node)) {
    const auto& y = std::get<IfElse>(b.node);
    return x->cond == y.cond && x->then_body == y.then_body &&
           x->else_body == y.else_body;
  }
  const auto& x = std::get<IfOnly>(a.node);
  const auto& y = std::get<IfOnly>(b.node);
  return x.cond == y.cond && x.then_body == y.then_body;
}

bool operator==(const ProgramAst& a, const ProgramAst& b) {
  return a.body == b.body;
}

std::string block_store_name(const Stmt& stmt) {
  if (const auto* a = std::get_if<Action>(&stmt.node)) {
    return action_name(a->kind);
  }
  if (std::holds_alternative<RepeatUntilGoal>(stmt.node)) {
    return "RepeatUntil(goal)";
  }
  if (const auto* ie = std::get_if<IfElse>(&stmt.node)) {
    return "IfElse(" + cond_name(ie->cond) + ")";
  }
  return "IfElse(" + cond_name(std::get<IfOnly>(stmt.node).cond) + ")";
}

namespace {

void visit_attributes(const StmtList& body, int depth, CodeAttributes& out) {
  out.depth = std::max(out.depth, depth);
  for (const Stmt& s : body) {
    out.size += 1;
    out.blocks.insert(block_store_name(s));
    out.depth = std::max(out.depth, depth + 1);
    if (const auto* r = std::get_if<RepeatUntilGoal>(&s.node)) {
      visit_attributes(r->body, depth + 1, out);
    } else if (const auto* ie = std::get_if<IfElse>(&s.node)) {
      visit_attributes(ie->then_body, depth + 1, out);
      visit_attributes(ie->else_body, depth + 1, out);
    } else if (const auto* io = std::get_if<IfOnly>(&s.node)) {
      visit_attributes(io->then_body, depth + 1, out);
    }
  }
}

void visit_skeleton(const StmtList& body, SkeletonNode& parent) {
  for (const Stmt& s : body) {
    if (const auto* r = std::get_if<RepeatUntilGoal>(&s.node)) {
      SkeletonNode n{"repeat_until_goal", {}};
      visit_skeleton(r->body, n);
      parent.children.push_back(std::move(n));
    } else if (const auto* ie = std::get_if<IfElse>(&s.node)) {
      SkeletonNode n{"if_else", {}};
      visit_skeleton(ie->then_body, n);
      visit_skeleton(ie->else_body, n);
      parent.children.push_back(std::move(n));
    } else if (const auto* io = std::get_if<IfOnly>(&s.node)) {
      SkeletonNode n{"if", {}};
      visit_skeleton(io->then_body, n);
      parent.children.push_back(std::move(n));
    }
  }
}

}  // namespace

CodeAttributes code_attributes(const ProgramAst& ast) {
  CodeAttributes out;
  if (ast.body.empty()) return out;  // size 0, depth 0
  visit_attributes(ast.body, 0, out);
  return out;
}

bool operator==(const SkeletonNode& a, const SkeletonNode& b) {
  return a.kind == b.kind && a.children == b.children;
}

SkeletonNode construct_skeleton(const ProgramAst& ast) {
  SkeletonNode root{"run", {}};
  visit_skeleton(ast.body, root);
  return root;
}

std::string skeleton_to_string(const SkeletonNode& node) {
  std::string out = node.kind;
  if (!node.children.empty()) {
    out += "(";
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      if (i > 0) out += ",";
      out += skeleton_to_string(node.children[i]);
    }
    out += ")";
  }
  return out;
}

}  // namespace ssyn
