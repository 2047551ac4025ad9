#pragma once

#include <stdexcept>
#include <string>

#include "ssyn/ast.hpp"

namespace ssyn {

// Malformed code documents carry a JSON-pointer-style path to the offending
// element, e.g. "/run/1/repeat_until_goal".
class CodeParseError : public std::runtime_error {
 public:
  CodeParseError(const std::string& message, const std::string& path)
      : std::runtime_error(message + " at " + path), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Canonical document: {"run":[{"a":"move"},{"repeat_until_goal":[...]},
// {"if_else":{"cond":"path_left","then":[...],"else":[...]}},
// {"if":{"cond":...,"then":[...]}}]}
ProgramAst parse_code(const std::string& text);

// Deterministic key-ordered compact form; parse(serialize(x)) == x and
// serialize(parse(t)) == t for canonical t.
std::string serialize_code(const ProgramAst& ast);

// Indented block rendering for humans; not parsed back.
std::string pretty_print(const ProgramAst& ast);

ProgramAst load_code_file(const std::string& path);

}  // namespace ssyn
