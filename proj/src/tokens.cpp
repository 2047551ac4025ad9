#include "ssyn/tokens.hpp"

#include <stdexcept>

namespace ssyn {

namespace tok {
const std::string kMove = "move";
const std::string kTurnLeft = "turnLeft";
const std::string kTurnRight = "turnRight";
const std::string kRepeatOpen = "REPEAT_UNTIL_GOAL(";
const std::string kRepeatClose = ")";
const std::string kElse = "}ELSE{";
const std::string kBlockClose = "}";

std::string if_open(CondKind c) { return "IF(" + cond_name(c) + "){"; }
}  // namespace tok

const std::string& action_token(ActionKind k) {
  switch (k) {
    case ActionKind::Move: return tok::kMove;
    case ActionKind::TurnLeft: return tok::kTurnLeft;
    case ActionKind::TurnRight: return tok::kTurnRight;
  }
  return tok::kMove;
}

namespace {

void emit(const StmtList& body, std::vector<std::string>& out) {
  for (const Stmt& s : body) {
    if (const auto* a = std::get_if<Action>(&s.node)) {
      out.push_back(action_token(a->kind));
    } else if (const auto* r = std::get_if<RepeatUntilGoal>(&s.node)) {
      out.push_back(tok::kRepeatOpen);
      emit(r->body, out);
      out.push_back(tok::kRepeatClose);
    } else if (const auto* ie = std::get_if<IfElse>(&s.node)) {
      out.push_back(tok::if_open(ie->cond));
      emit(ie->then_body, out);
      out.push_back(tok::kElse);
      emit(ie->else_body, out);
      out.push_back(tok::kBlockClose);
    } else {
      const auto& io = std::get<IfOnly>(s.node);
      out.push_back(tok::if_open(io.cond));
      emit(io.then_body, out);
      out.push_back(tok::kBlockClose);
    }
  }
}

struct TokenCursor {
  const std::vector<std::string>& tokens;
  std::size_t pos = 0;

  bool done() const { return pos >= tokens.size(); }
  const std::string& peek() const { return tokens[pos]; }
  const std::string& take() { return tokens[pos++]; }
};

bool parse_if_open(const std::string& t, CondKind& out) {
  for (CondKind c :
       {CondKind::PathAhead, CondKind::PathLeft, CondKind::PathRight}) {
    if (t == tok::if_open(c)) {
      out = c;
      return true;
    }
  }
  return false;
}

// Parses statements until one of the stop tokens (not consumed) or the end.
StmtList parse_stmts(TokenCursor& cur, bool stop_at_close, bool stop_at_else) {
  StmtList out;
  while (!cur.done()) {
    const std::string& t = cur.peek();
    if ((stop_at_close &&
         (t == tok::kBlockClose || t == tok::kRepeatClose)) ||
        (stop_at_else && t == tok::kElse)) {
      return out;
    }
    cur.take();
    if (t == tok::kMove) {
      out.push_back(make_move());
    } else if (t == tok::kTurnLeft) {
      out.push_back(make_turn_left());
    } else if (t == tok::kTurnRight) {
      out.push_back(make_turn_right());
    } else if (t == tok::kRepeatOpen) {
      StmtList body = parse_stmts(cur, true, false);
      if (cur.done() || cur.take() != tok::kRepeatClose) {
        throw std::runtime_error("unbalanced REPEAT_UNTIL_GOAL(");
      }
      out.push_back(make_repeat(std::move(body)));
    } else {
      CondKind cond;
      if (!parse_if_open(t, cond)) {
        throw std::runtime_error("unknown token '" + t + "'");
      }
      StmtList then_body = parse_stmts(cur, true, true);
      if (cur.done()) throw std::runtime_error("unbalanced IF block");
      const std::string closer = cur.take();
      if (closer == tok::kElse) {
        StmtList else_body = parse_stmts(cur, true, false);
        if (cur.done() || cur.take() != tok::kBlockClose) {
          throw std::runtime_error("unbalanced ELSE block");
        }
        out.push_back(
            make_if_else(cond, std::move(then_body), std::move(else_body)));
      } else if (closer == tok::kBlockClose) {
        out.push_back(make_if(cond, std::move(then_body)));
      } else {
        throw std::runtime_error("unbalanced IF block");
      }
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> tokenize(const ProgramAst& ast) {
  std::vector<std::string> out;
  emit(ast.body, out);
  return out;
}

ProgramAst detokenize(const std::vector<std::string>& tokens) {
  TokenCursor cur{tokens};
  ProgramAst ast;
  ast.body = parse_stmts(cur, true, true);
  if (!cur.done()) {
    throw std::runtime_error("unexpected closing token '" + cur.peek() + "'");
  }
  return ast;
}

std::set<std::string> store_token_alphabet(
    const std::set<std::string>& store) {
  std::set<std::string> out;
  for (const std::string& name : store) {
    if (name == "move") {
      out.insert(tok::kMove);
    } else if (name == "turnLeft") {
      out.insert(tok::kTurnLeft);
    } else if (name == "turnRight") {
      out.insert(tok::kTurnRight);
    } else if (name == "RepeatUntil(goal)") {
      out.insert(tok::kRepeatOpen);
      out.insert(tok::kRepeatClose);
    } else if (name == "IfElse(pathAhead)") {
      out.insert(tok::if_open(CondKind::PathAhead));
      out.insert(tok::kElse);
      out.insert(tok::kBlockClose);
    } else if (name == "IfElse(pathLeft)") {
      out.insert(tok::if_open(CondKind::PathLeft));
      out.insert(tok::kElse);
      out.insert(tok::kBlockClose);
    } else if (name == "IfElse(pathRight)") {
      out.insert(tok::if_open(CondKind::PathRight));
      out.insert(tok::kElse);
      out.insert(tok::kBlockClose);
    } else {
      throw std::runtime_error("unknown store block '" + name + "'");
    }
  }
  return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace ssyn
