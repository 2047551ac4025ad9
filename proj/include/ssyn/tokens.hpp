#pragma once

#include <set>
#include <string>
#include <vector>

#include "ssyn/ast.hpp"

namespace ssyn {

// Flat token alphabet over which grammars operate. A program is rendered as
// a pre-order token sequence; bracket tokens carry the construct structure:
//   move turnLeft turnRight
//   REPEAT_UNTIL_GOAL( ... )
//   IF(pathAhead){ ... }ELSE{ ... }
//   IF(pathLeft){ ... }            (conditional without else)
namespace tok {
extern const std::string kMove;
extern const std::string kTurnLeft;
extern const std::string kTurnRight;
extern const std::string kRepeatOpen;
extern const std::string kRepeatClose;
extern const std::string kElse;
extern const std::string kBlockClose;
std::string if_open(CondKind c);
}  // namespace tok

std::vector<std::string> tokenize(const ProgramAst& ast);

// Re-nests a token sequence into a program; throws std::runtime_error on
// unbalanced brackets or unknown tokens.
ProgramAst detokenize(const std::vector<std::string>& tokens);

const std::string& action_token(ActionKind k);

// Token alphabet reachable from a block store (store names as in MazeTask).
std::set<std::string> store_token_alphabet(const std::set<std::string>& store);

std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace ssyn
