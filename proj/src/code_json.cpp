#include "ssyn/code_json.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ssyn {

namespace {

using json = nlohmann::ordered_json;

ActionKind parse_action(const std::string& name, const std::string& path) {
  if (name == "move") return ActionKind::Move;
  if (name == "turn_left") return ActionKind::TurnLeft;
  if (name == "turn_right") return ActionKind::TurnRight;
  throw CodeParseError("unknown action '" + name + "'", path);
}

CondKind parse_cond(const json& j, const std::string& path) {
  if (!j.is_string()) throw CodeParseError("condition must be a string", path);
  const std::string name = j.get<std::string>();
  if (name == "path_ahead") return CondKind::PathAhead;
  if (name == "path_left") return CondKind::PathLeft;
  if (name == "path_right") return CondKind::PathRight;
  throw CodeParseError("unknown condition '" + name + "'", path);
}

StmtList parse_body(const json& j, const std::string& path, bool allow_empty);

Stmt parse_stmt(const json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1) {
    throw CodeParseError("statement must be a single-key object", path);
  }
  const auto& key = j.begin().key();
  const auto& value = j.begin().value();
  if (key == "a") {
    if (!value.is_string()) {
      throw CodeParseError("action must be a string", path + "/a");
    }
    return make_action(parse_action(value.get<std::string>(), path + "/a"));
  }
  if (key == "repeat_until_goal") {
    return make_repeat(
        parse_body(value, path + "/repeat_until_goal", false));
  }
  if (key == "if_else") {
    const std::string p = path + "/if_else";
    if (!value.is_object()) throw CodeParseError("if_else must be an object", p);
    if (!value.contains("cond") || !value.contains("then") ||
        !value.contains("else")) {
      throw CodeParseError("if_else needs cond/then/else", p);
    }
    return make_if_else(parse_cond(value.at("cond"), p + "/cond"),
                        parse_body(value.at("then"), p + "/then", false),
                        parse_body(value.at("else"), p + "/else", false));
  }
  if (key == "if") {
    const std::string p = path + "/if";
    if (!value.is_object()) throw CodeParseError("if must be an object", p);
    if (!value.contains("cond") || !value.contains("then")) {
      throw CodeParseError("if needs cond/then", p);
    }
    return make_if(parse_cond(value.at("cond"), p + "/cond"),
                   parse_body(value.at("then"), p + "/then", false));
  }
  throw CodeParseError("unknown block '" + key + "'", path);
}

StmtList parse_body(const json& j, const std::string& path, bool allow_empty) {
  if (!j.is_array()) throw CodeParseError("body must be an array", path);
  if (j.empty() && !allow_empty) {
    throw CodeParseError("empty construct body", path);
  }
  StmtList out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(parse_stmt(j[i], path + "/" + std::to_string(i)));
  }
  return out;
}

json stmt_to_json(const Stmt& s);

json body_to_json(const StmtList& body) {
  json arr = json::array();
  for (const Stmt& s : body) arr.push_back(stmt_to_json(s));
  return arr;
}

std::string action_json_name(ActionKind k) {
  switch (k) {
    case ActionKind::Move: return "move";
    case ActionKind::TurnLeft: return "turn_left";
    case ActionKind::TurnRight: return "turn_right";
  }
  return "move";
}

std::string cond_json_name(CondKind c) {
  switch (c) {
    case CondKind::PathAhead: return "path_ahead";
    case CondKind::PathLeft: return "path_left";
    case CondKind::PathRight: return "path_right";
  }
  return "path_ahead";
}

json stmt_to_json(const Stmt& s) {
  json j = json::object();
  if (const auto* a = std::get_if<Action>(&s.node)) {
    j["a"] = action_json_name(a->kind);
  } else if (const auto* r = std::get_if<RepeatUntilGoal>(&s.node)) {
    j["repeat_until_goal"] = body_to_json(r->body);
  } else if (const auto* ie = std::get_if<IfElse>(&s.node)) {
    json inner = json::object();
    inner["cond"] = cond_json_name(ie->cond);
    inner["then"] = body_to_json(ie->then_body);
    inner["else"] = body_to_json(ie->else_body);
    j["if_else"] = std::move(inner);
  } else {
    const auto& io = std::get<IfOnly>(s.node);
    json inner = json::object();
    inner["cond"] = cond_json_name(io.cond);
    inner["then"] = body_to_json(io.then_body);
    j["if"] = std::move(inner);
  }
  return j;
}

void pretty_body(const StmtList& body, int indent, std::ostringstream& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (const Stmt& s : body) {
    if (const auto* a = std::get_if<Action>(&s.node)) {
      out << pad << action_name(a->kind) << "\n";
    } else if (const auto* r = std::get_if<RepeatUntilGoal>(&s.node)) {
      out << pad << "RepeatUntil(goal){\n";
      pretty_body(r->body, indent + 1, out);
      out << pad << "}\n";
    } else if (const auto* ie = std::get_if<IfElse>(&s.node)) {
      out << pad << "If(" << cond_name(ie->cond) << "){\n";
      pretty_body(ie->then_body, indent + 1, out);
      out << pad << "}\n" << pad << "Else{\n";
      pretty_body(ie->else_body, indent + 1, out);
      out << pad << "}\n";
    } else {
      const auto& io = std::get<IfOnly>(s.node);
      out << pad << "If(" << cond_name(io.cond) << "){\n";
      pretty_body(io.then_body, indent + 1, out);
      out << pad << "}\n";
    }
  }
}

}  // namespace

ProgramAst parse_code(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CodeParseError(std::string("malformed JSON: ") + e.what(), "/");
  }
  if (!doc.is_object() || !doc.contains("run")) {
    throw CodeParseError("document must be {\"run\": [...]}", "/");
  }
  ProgramAst ast;
  ast.body = parse_body(doc.at("run"), "/run", true);
  return ast;
}

std::string serialize_code(const ProgramAst& ast) {
  json doc = json::object();
  doc["run"] = body_to_json(ast.body);
  return doc.dump();
}

std::string pretty_print(const ProgramAst& ast) {
  std::ostringstream out;
  out << "def Run(){\n";
  pretty_body(ast.body, 1, out);
  out << "}\n";
  return out.str();
}

ProgramAst load_code_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open code file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_code(buf.str());
}

}  // namespace ssyn
