#include "ssyn/grammar_templates.hpp"

#include <algorithm>
#include <stdexcept>

#include "ssyn/tokens.hpp"

namespace ssyn {

namespace {

constexpr ActionKind kAllActions[] = {ActionKind::Move, ActionKind::TurnLeft,
                                      ActionKind::TurnRight};

bool is_turn(ActionKind k) { return k != ActionKind::Move; }

ActionKind swap_turn(ActionKind k) {
  if (k == ActionKind::TurnLeft) return ActionKind::TurnRight;
  if (k == ActionKind::TurnRight) return ActionKind::TurnLeft;
  return k;
}

class GrammarBuilder {
 public:
  GrammarBuilder(std::string start, const NoiseTail& noise)
      : noise_(noise) {
    g_.start = std::move(start);
    g_.nonterminals.insert(g_.start);
  }

  const std::string& terminal(const std::string& token) {
    g_.terminals.insert(token);
    return *g_.terminals.find(token);
  }

  void add_rule(const std::string& lhs, std::vector<std::string> rhs,
                double prob) {
    g_.nonterminals.insert(lhs);
    g_.productions.push_back({lhs, std::move(rhs), prob});
  }

  void add_start(std::vector<std::string> rhs, double prob) {
    add_rule(g_.start, std::move(rhs), prob);
  }

  // Noisy slot for an action: emits its own token most of the time, another
  // action token occasionally, or splits into two replication symbols.
  std::string act(ActionKind kind) {
    const std::string sym = "A_" + action_name(kind);
    if (g_.nonterminals.count(sym)) return sym;
    const std::string rep = "R_" + action_name(kind);
    add_rule(sym, {rep, rep}, noise_.split);
    for (ActionKind k : kAllActions) {
      add_rule(sym, {terminal(action_token(k))},
               k == kind ? noise_.direct : noise_.split);
    }
    add_rule(rep, {rep, rep}, noise_.rep_continue);
    for (ActionKind k : kAllActions) {
      add_rule(rep, {terminal(action_token(k))},
               k == kind ? noise_.rep_continue : noise_.rep_off);
    }
    return sym;
  }

  std::vector<std::string> act_seq(const std::vector<ActionKind>& actions) {
    std::vector<std::string> out;
    out.reserve(actions.size());
    for (ActionKind k : actions) out.push_back(act(k));
    return out;
  }

  Pcfg build() {
    g_.validate();
    return std::move(g_);
  }

 private:
  Pcfg g_;
  NoiseTail noise_;
};

// p^a * q^b with a canonical multiplication order, so variants that keep and
// omit the same counts get bit-identical probabilities.
double pow_product(double p, int a, double q, int b) {
  double out = 1.0;
  for (int i = 0; i < a; ++i) out *= p;
  for (int i = 0; i < b; ++i) out *= q;
  return out;
}

void check_lattice_size(std::size_t items, const std::string& template_name) {
  if (items > 16) {
    throw std::invalid_argument("template '" + template_name +
                                "' cannot enumerate " +
                                std::to_string(items) + " variation points");
  }
}

std::vector<ActionKind> flat_actions(const ProgramAst& solution,
                                     const std::string& template_name) {
  std::vector<ActionKind> out;
  for (const Stmt& s : solution.body) {
    const auto* a = std::get_if<Action>(&s.node);
    if (!a) {
      throw std::invalid_argument("template '" + template_name +
                                  "' needs an action-only solution");
    }
    out.push_back(a->kind);
  }
  if (out.empty()) {
    throw std::invalid_argument("template '" + template_name +
                                "' needs a nonempty solution");
  }
  return out;
}

// Shape of a loop-based solution:
//   Run { prefix..., RepeatUntil{ IfElse(cond){then}{else}, loop_tail... },
//         suffix... }
struct LoopShape {
  std::vector<ActionKind> prefix;
  CondKind cond = CondKind::PathAhead;
  std::vector<ActionKind> then_body;
  std::vector<ActionKind> else_body;
  std::vector<ActionKind> loop_tail;
  std::vector<ActionKind> suffix;
};

std::vector<ActionKind> actions_only(const StmtList& body,
                                     const std::string& where) {
  std::vector<ActionKind> out;
  for (const Stmt& s : body) {
    const auto* a = std::get_if<Action>(&s.node);
    if (!a) {
      throw std::invalid_argument("unsupported nesting in " + where);
    }
    out.push_back(a->kind);
  }
  return out;
}

LoopShape decompose_loop_solution(const ProgramAst& solution,
                                  const std::string& template_name) {
  LoopShape shape;
  std::size_t i = 0;
  while (i < solution.body.size() &&
         std::holds_alternative<Action>(solution.body[i].node)) {
    shape.prefix.push_back(std::get<Action>(solution.body[i].node).kind);
    ++i;
  }
  if (i >= solution.body.size() ||
      !std::holds_alternative<RepeatUntilGoal>(solution.body[i].node)) {
    throw std::invalid_argument("template '" + template_name +
                                "' needs a loop-based solution");
  }
  const auto& loop = std::get<RepeatUntilGoal>(solution.body[i].node);
  ++i;
  shape.suffix = actions_only(
      StmtList(solution.body.begin() + static_cast<long>(i),
               solution.body.end()),
      "solution suffix");

  if (loop.body.empty() ||
      !std::holds_alternative<IfElse>(loop.body.front().node)) {
    throw std::invalid_argument("template '" + template_name +
                                "' needs an if/else at the loop head");
  }
  const auto& branch = std::get<IfElse>(loop.body.front().node);
  shape.cond = branch.cond;
  shape.then_body = actions_only(branch.then_body, "then branch");
  shape.else_body = actions_only(branch.else_body, "else branch");
  shape.loop_tail = actions_only(
      StmtList(loop.body.begin() + 1, loop.body.end()), "loop tail");
  if (shape.then_body.empty() || shape.else_body.empty()) {
    throw std::invalid_argument("branch bodies must be nonempty");
  }
  return shape;
}

double get_param(const BehaviorType& type, const char* key, double fallback) {
  if (type.params.contains(key)) return type.params.at(key).get<double>();
  return fallback;
}

// ---- action-sequence templates ----------------------------------------

Pcfg turn_confusion(const ProgramAst& solution, const BehaviorType& type,
                    const NoiseTail& noise) {
  const auto actions = flat_actions(solution, type.template_name);
  const double swap_p = get_param(type, "swap_prob", 0.75);
  std::vector<std::size_t> turns;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (is_turn(actions[i])) turns.push_back(i);
  }
  check_lattice_size(turns.size(), type.template_name);
  GrammarBuilder b("Start", noise);
  const std::size_t k = turns.size();
  for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
    std::vector<ActionKind> variant = actions;
    int swapped = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (mask & (1ULL << j)) {
        variant[turns[j]] = swap_turn(variant[turns[j]]);
        ++swapped;
      }
    }
    b.add_start(b.act_seq(variant),
                pow_product(swap_p, swapped, 1.0 - swap_p,
                            static_cast<int>(k) - swapped));
  }
  return b.build();
}

Pcfg partial_progress(const ProgramAst& solution, const BehaviorType& type,
                      const NoiseTail& noise) {
  const auto actions = flat_actions(solution, type.template_name);
  GrammarBuilder b("Start", noise);
  // The fragment the student does write is faithful; the language is the
  // strict nonempty prefixes of the solution, uniformly weighted.
  auto literal_prefix = [&](std::size_t len) {
    std::vector<std::string> rhs;
    for (std::size_t i = 0; i < len; ++i) {
      rhs.push_back(b.terminal(action_token(actions[i])));
    }
    return rhs;
  };
  const std::size_t n = actions.size();
  if (n == 1) {
    b.add_start(literal_prefix(1), 1.0);
    return b.build();
  }
  const double p = 1.0 / static_cast<double>(n - 1);
  for (std::size_t len = 1; len < n; ++len) {
    b.add_start(literal_prefix(len), p);
  }
  return b.build();
}

Pcfg repetitive_turns(const ProgramAst& solution, const BehaviorType& type,
                      const NoiseTail& noise) {
  const auto actions = flat_actions(solution, type.template_name);
  const double cont = get_param(type, "continue_prob", 0.5);
  GrammarBuilder b("Start", noise);
  std::vector<std::string> rhs;
  bool has_turn = false;
  for (ActionKind a : actions) {
    if (is_turn(a)) {
      rhs.push_back("TurnBurst");
      has_turn = true;
    } else {
      rhs.push_back(b.act(a));
    }
  }
  if (has_turn) {
    // a burst is at least two turns, geometric afterwards
    b.add_rule("TurnBurst", {"AnyTurn", "BurstTail"}, 1.0);
    b.add_rule("BurstTail", {"AnyTurn", "BurstTail"}, cont);
    b.add_rule("BurstTail", {"AnyTurn"}, 1.0 - cont);
    b.add_rule("AnyTurn", {b.terminal(tok::kTurnLeft)}, 0.5);
    b.add_rule("AnyTurn", {b.terminal(tok::kTurnRight)}, 0.5);
  }
  b.add_start(std::move(rhs), 1.0);
  return b.build();
}

Pcfg extra_moves(const ProgramAst& solution, const BehaviorType& type,
                 const NoiseTail& noise) {
  const auto actions = flat_actions(solution, type.template_name);
  const double extra_p = get_param(type, "extra_prob", 0.5);
  const double cont = get_param(type, "continue_prob", 0.5);
  std::vector<std::size_t> moves;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i] == ActionKind::Move) moves.push_back(i);
  }
  check_lattice_size(moves.size(), type.template_name);
  GrammarBuilder b("Start", noise);
  const std::size_t m = moves.size();
  if (m == 0) {
    b.add_start(b.act_seq(actions), 1.0);
    return b.build();
  }
  // The run starts with the solution's own (noisy) move slot; the inserted
  // extras are plain move blocks.
  b.add_rule("MoveRun", {b.act(ActionKind::Move), "MoveRunTail"}, 1.0);
  b.add_rule("MoveRunTail", {b.terminal(tok::kMove), "MoveRunTail"}, cont);
  b.add_rule("MoveRunTail", {b.terminal(tok::kMove)}, 1.0 - cont);
  // Every alternative lengthens at least one move run; the solution itself
  // is outside the grammar's language.
  const double z = 1.0 - pow_product(1.0 - extra_p, static_cast<int>(m), 1.0, 0);
  for (std::uint64_t mask = 1; mask < (1ULL << m); ++mask) {
    std::vector<std::string> rhs;
    int lengthened = 0;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      const auto slot = std::find(moves.begin(), moves.end(), i);
      if (slot != moves.end() &&
          (mask & (1ULL << (slot - moves.begin())))) {
        rhs.push_back("MoveRun");
        ++lengthened;
      } else {
        rhs.push_back(b.act(actions[i]));
      }
    }
    b.add_start(std::move(rhs),
                pow_product(extra_p, lengthened, 1.0 - extra_p,
                            static_cast<int>(m) - lengthened) /
                    z);
  }
  return b.build();
}

Pcfg forgotten_turns(const ProgramAst& solution, const BehaviorType& type,
                     const NoiseTail& noise) {
  const auto actions = flat_actions(solution, type.template_name);
  const double keep_p = get_param(type, "keep_prob", 1.0 / 3.0);
  std::vector<std::size_t> turns;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (is_turn(actions[i])) turns.push_back(i);
  }
  check_lattice_size(turns.size(), type.template_name);
  GrammarBuilder b("Start", noise);
  const std::size_t k = turns.size();
  for (std::uint64_t keep_mask = 0; keep_mask < (1ULL << k); ++keep_mask) {
    std::vector<ActionKind> variant;
    int kept = 0;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      const auto slot = std::find(turns.begin(), turns.end(), i);
      if (slot == turns.end()) {
        variant.push_back(actions[i]);
      } else if (keep_mask & (1ULL << (slot - turns.begin()))) {
        variant.push_back(actions[i]);
        ++kept;
      }
    }
    b.add_start(b.act_seq(variant),
                pow_product(keep_p, kept, 1.0 - keep_p,
                            static_cast<int>(k) - kept));
  }
  return b.build();
}

void add_free_sequence(GrammarBuilder& b, const BehaviorType& type,
                       const NoiseTail&, double default_continue) {
  const double cont = get_param(type, "continue_prob", default_continue);
  const double wm = get_param(type, "move_weight", 1.0);
  const double wl = get_param(type, "turn_left_weight", 1.0);
  const double wr = get_param(type, "turn_right_weight", 1.0);
  const double total = wm + wl + wr;
  b.add_rule("FreeSeq", {"FreeAct", "FreeSeq"}, cont);
  b.add_rule("FreeSeq", {"FreeAct"}, 1.0 - cont);
  b.add_rule("FreeAct", {b.terminal(tok::kMove)}, wm / total);
  b.add_rule("FreeAct", {b.terminal(tok::kTurnLeft)}, wl / total);
  b.add_rule("FreeAct", {b.terminal(tok::kTurnRight)}, wr / total);
}

Pcfg random_blocks(const BehaviorType& type, const NoiseTail& noise) {
  GrammarBuilder b("Start", noise);
  // These attempts pile up blocks; a batch of actions is mandatory before
  // the geometric tail.
  const int min_actions =
      static_cast<int>(get_param(type, "min_actions", 11.0));
  std::vector<std::string> rhs(static_cast<std::size_t>(min_actions),
                               "FreeAct");
  rhs.push_back("FreeSeq");
  b.add_start(std::move(rhs), 1.0);
  add_free_sequence(b, type, noise, 0.9);
  return b.build();
}

// ---- loop-structure templates ------------------------------------------

void append_branch_tokens(GrammarBuilder& b, std::vector<std::string>& rhs,
                          CondKind cond,
                          const std::vector<ActionKind>& then_body,
                          const std::vector<ActionKind>& else_body) {
  rhs.push_back(b.terminal(tok::if_open(cond)));
  for (ActionKind a : then_body) rhs.push_back(b.act(a));
  rhs.push_back(b.terminal(tok::kElse));
  for (ActionKind a : else_body) rhs.push_back(b.act(a));
  rhs.push_back(b.terminal(tok::kBlockClose));
}

struct SwapItem {
  enum Kind { Turn, Cond } kind;
  // Turn: location encoded as (segment, index); segments are resolved by
  // the variant assembler below.
  int segment = 0;
  std::size_t index = 0;
};

Pcfg turn_or_cond_confusion(const ProgramAst& solution,
                            const BehaviorType& type, const NoiseTail& noise) {
  const LoopShape shape = decompose_loop_solution(solution, type.template_name);
  const double swap_p = get_param(type, "swap_prob", 0.75);

  std::vector<const std::vector<ActionKind>*> segments = {
      &shape.prefix, &shape.then_body, &shape.else_body, &shape.loop_tail,
      &shape.suffix};
  std::vector<SwapItem> items;
  for (int seg = 0; seg < static_cast<int>(segments.size()); ++seg) {
    for (std::size_t i = 0; i < segments[seg]->size(); ++i) {
      if (is_turn((*segments[seg])[i])) {
        items.push_back({SwapItem::Turn, seg, i});
      }
    }
  }
  if (shape.cond != CondKind::PathAhead) {
    items.push_back({SwapItem::Cond, 0, 0});
  }

  check_lattice_size(items.size(), type.template_name);
  GrammarBuilder b("Start", noise);
  const std::size_t k = items.size();
  for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
    std::vector<std::vector<ActionKind>> segs;
    for (const auto* s : segments) segs.push_back(*s);
    CondKind cond = shape.cond;
    int swapped = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (!(mask & (1ULL << j))) continue;
      ++swapped;
      const SwapItem& item = items[j];
      if (item.kind == SwapItem::Turn) {
        segs[item.segment][item.index] =
            swap_turn(segs[item.segment][item.index]);
      } else {
        cond = cond == CondKind::PathLeft ? CondKind::PathRight
                                          : CondKind::PathLeft;
      }
    }
    std::vector<std::string> rhs;
    for (ActionKind a : segs[0]) rhs.push_back(b.act(a));
    rhs.push_back(b.terminal(tok::kRepeatOpen));
    append_branch_tokens(b, rhs, cond, segs[1], segs[2]);
    for (ActionKind a : segs[3]) rhs.push_back(b.act(a));
    rhs.push_back(b.terminal(tok::kRepeatClose));
    for (ActionKind a : segs[4]) rhs.push_back(b.act(a));
    b.add_start(std::move(rhs),
                pow_product(swap_p, swapped, 1.0 - swap_p,
                            static_cast<int>(k) - swapped));
  }
  return b.build();
}

struct Policy {
  CondKind cond;
  std::vector<ActionKind> then_body;
  std::vector<ActionKind> else_body;
};

Pcfg wrong_path_segment(const ProgramAst& solution, const BehaviorType& type,
                        const NoiseTail& noise) {
  const LoopShape shape = decompose_loop_solution(solution, type.template_name);
  // The side policies pair with turn confusion when mixed with left/right
  // solutions, so the wrong set stays in the opposite condition family.
  std::vector<Policy> wrong;
  if (shape.cond == CondKind::PathAhead) {
    wrong.push_back({CondKind::PathLeft,
                     {ActionKind::TurnLeft, ActionKind::Move},
                     {ActionKind::Move}});
    wrong.push_back({CondKind::PathRight,
                     {ActionKind::TurnRight, ActionKind::Move},
                     {ActionKind::Move}});
  } else {
    wrong.push_back({CondKind::PathAhead,
                     {ActionKind::Move},
                     {ActionKind::TurnLeft}});
    wrong.push_back({CondKind::PathAhead,
                     {ActionKind::Move},
                     {ActionKind::TurnRight}});
  }

  GrammarBuilder b("Start", noise);
  const double p = 1.0 / static_cast<double>(wrong.size());
  for (const Policy& policy : wrong) {
    std::vector<std::string> rhs;
    for (ActionKind a : shape.prefix) rhs.push_back(b.act(a));
    rhs.push_back(b.terminal(tok::kRepeatOpen));
    append_branch_tokens(b, rhs, policy.cond, policy.then_body,
                         policy.else_body);
    rhs.push_back(b.terminal(tok::kRepeatClose));
    for (ActionKind a : shape.suffix) rhs.push_back(b.act(a));
    b.add_start(std::move(rhs), p);
  }
  return b.build();
}

Pcfg same_both_branches(const ProgramAst& solution, const BehaviorType& type,
                        const NoiseTail& noise) {
  const LoopShape shape = decompose_loop_solution(solution, type.template_name);
  GrammarBuilder b("Start", noise);
  // Either branch body may be the duplicated one; the other body trails the
  // conditional inside the loop, so the loop still makes progress.
  const std::vector<ActionKind>* duplicated[] = {&shape.then_body,
                                                 &shape.else_body};
  const std::vector<ActionKind>* trailing[] = {&shape.else_body,
                                               &shape.then_body};
  for (int v = 0; v < 2; ++v) {
    std::vector<std::string> rhs;
    for (ActionKind a : shape.prefix) rhs.push_back(b.act(a));
    rhs.push_back(b.terminal(tok::kRepeatOpen));
    append_branch_tokens(b, rhs, shape.cond, *duplicated[v], *duplicated[v]);
    for (ActionKind a : *trailing[v]) rhs.push_back(b.act(a));
    for (ActionKind a : shape.loop_tail) rhs.push_back(b.act(a));
    rhs.push_back(b.terminal(tok::kRepeatClose));
    for (ActionKind a : shape.suffix) rhs.push_back(b.act(a));
    b.add_start(std::move(rhs), 0.5);
  }
  return b.build();
}

Pcfg ignore_if_else(const ProgramAst& solution, const BehaviorType& type,
                    const NoiseTail& noise) {
  const LoopShape shape = decompose_loop_solution(solution, type.template_name);
  GrammarBuilder b("Start", noise);
  add_free_sequence(b, type, noise, 0.75);
  // The loop is kept; its body degenerates to a free action sequence. The
  // approach prefix may be kept or skipped.
  for (int keep_prefix = 0; keep_prefix < 2; ++keep_prefix) {
    std::vector<std::string> rhs;
    if (keep_prefix) {
      for (ActionKind a : shape.prefix) rhs.push_back(b.act(a));
    }
    rhs.push_back(b.terminal(tok::kRepeatOpen));
    rhs.push_back("FreeSeq");
    rhs.push_back(b.terminal(tok::kRepeatClose));
    for (ActionKind a : shape.suffix) rhs.push_back(b.act(a));
    b.add_start(std::move(rhs), 0.5);
  }
  return b.build();
}

Pcfg ignore_while(const ProgramAst& solution, const BehaviorType& type,
                  const NoiseTail& noise) {
  const LoopShape shape = decompose_loop_solution(solution, type.template_name);
  GrammarBuilder b("Start", noise);
  // The loop disappears; its body is written out one or two times, possibly
  // after an exploratory move.
  for (int lead = 0; lead < 2; ++lead) {
    for (int reps = 1; reps <= 2; ++reps) {
      std::vector<std::string> rhs;
      for (ActionKind a : shape.prefix) rhs.push_back(b.act(a));
      if (lead) rhs.push_back(b.act(ActionKind::Move));
      for (int r = 0; r < reps; ++r) {
        append_branch_tokens(b, rhs, shape.cond, shape.then_body,
                             shape.else_body);
        for (ActionKind a : shape.loop_tail) rhs.push_back(b.act(a));
      }
      for (ActionKind a : shape.suffix) rhs.push_back(b.act(a));
      b.add_start(std::move(rhs), 0.25);
    }
  }
  return b.build();
}

Pcfg basic_actions_only(const BehaviorType& type, const NoiseTail& noise) {
  GrammarBuilder b("Start", noise);
  b.add_start({"FreeSeq"}, 1.0);
  add_free_sequence(b, type, noise, 0.9);
  return b.build();
}

}  // namespace

Pcfg build_type_grammar(const MazeTask& task, const ProgramAst& solution,
                        const BehaviorType& type, const NoiseTail& noise) {
  Pcfg g;
  if (type.template_name == "turn_confusion") {
    g = turn_confusion(solution, type, noise);
  } else if (type.template_name == "partial_progress") {
    g = partial_progress(solution, type, noise);
  } else if (type.template_name == "repetitive_turns") {
    g = repetitive_turns(solution, type, noise);
  } else if (type.template_name == "extra_moves") {
    g = extra_moves(solution, type, noise);
  } else if (type.template_name == "forgotten_turns") {
    g = forgotten_turns(solution, type, noise);
  } else if (type.template_name == "random_blocks") {
    g = random_blocks(type, noise);
  } else if (type.template_name == "turn_or_cond_confusion") {
    g = turn_or_cond_confusion(solution, type, noise);
  } else if (type.template_name == "wrong_path_segment") {
    g = wrong_path_segment(solution, type, noise);
  } else if (type.template_name == "same_both_branches") {
    g = same_both_branches(solution, type, noise);
  } else if (type.template_name == "ignore_if_else") {
    g = ignore_if_else(solution, type, noise);
  } else if (type.template_name == "ignore_while") {
    g = ignore_while(solution, type, noise);
  } else if (type.template_name == "basic_actions_only") {
    g = basic_actions_only(type, noise);
  } else {
    throw std::invalid_argument("unknown grammar template: " +
                                type.template_name);
  }

  const auto allowed = store_token_alphabet(task.store);
  for (const std::string& t : g.terminals) {
    if (!allowed.count(t)) {
      throw std::logic_error("grammar terminal '" + t +
                             "' is outside the task store of " + task.id);
    }
  }
  return g;
}

}  // namespace ssyn
