#pragma once

#include "ssyn/ast.hpp"
#include "ssyn/behavior.hpp"
#include "ssyn/pcfg.hpp"
#include "ssyn/task.hpp"

namespace ssyn {

// Builds the attempt grammar for one behavior type against a concrete
// (task, solution) pair. Start-rule alternatives are derived from the
// solution per the type's template; action slots share the noise tail.
Pcfg build_type_grammar(const MazeTask& task, const ProgramAst& solution,
                        const BehaviorType& type, const NoiseTail& noise);

}  // namespace ssyn
