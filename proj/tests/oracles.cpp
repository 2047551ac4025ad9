#include "oracles.hpp"

#include <algorithm>
#include <stdexcept>

namespace ssyn::oracle {

namespace {

using Forest = std::vector<LabeledTree>;

int forest_size(const Forest& f) {
  int n = 0;
  for (const LabeledTree& t : f) n += tree_size(t);
  return n;
}

int forest_distance(const Forest& f, const Forest& g) {
  if (f.empty()) return forest_size(g);
  if (g.empty()) return forest_size(f);

  const LabeledTree& rf = f.back();
  const LabeledTree& rg = g.back();

  Forest f_del(f.begin(), f.end() - 1);
  f_del.insert(f_del.end(), rf.children.begin(), rf.children.end());
  const int del = forest_distance(f_del, g) + 1;

  Forest g_ins(g.begin(), g.end() - 1);
  g_ins.insert(g_ins.end(), rg.children.begin(), rg.children.end());
  const int ins = forest_distance(f, g_ins) + 1;

  Forest f_rest(f.begin(), f.end() - 1);
  Forest g_rest(g.begin(), g.end() - 1);
  const int match = forest_distance(f_rest, g_rest) +
                    forest_distance(rf.children, rg.children) +
                    (rf.label == rg.label ? 0 : 1);

  return std::min({del, ins, match});
}

}  // namespace

int brute_force_edit_distance(const LabeledTree& a, const LabeledTree& b) {
  return forest_distance({a}, {b});
}

namespace {

struct SententialForm {
  std::vector<std::string> prefix;   // emitted terminals
  std::vector<std::string> pending;  // symbols still to expand (leftmost first)
  double prob = 1.0;
};

std::map<std::string, int> min_yields(const Pcfg& g) {
  std::map<std::string, int> min_yield;
  for (const std::string& nt : g.nonterminals) min_yield[nt] = 1 << 20;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Production& p : g.productions) {
      int total = 0;
      for (const std::string& sym : p.rhs) {
        total += g.terminals.count(sym) ? 1 : min_yield.at(sym);
      }
      if (total < min_yield.at(p.lhs)) {
        min_yield.at(p.lhs) = total;
        changed = true;
      }
    }
  }
  return min_yield;
}

}  // namespace

std::map<std::vector<std::string>, double> enumerate_strings(
    const Pcfg& g, std::size_t max_len) {
  const auto min_yield = min_yields(g);
  std::map<std::vector<std::string>, double> out;
  std::vector<SententialForm> stack;
  stack.push_back({{}, {g.start}, 1.0});
  while (!stack.empty()) {
    SententialForm form = std::move(stack.back());
    stack.pop_back();

    // move leading terminals into the prefix
    while (!form.pending.empty() && g.terminals.count(form.pending.front())) {
      form.prefix.push_back(form.pending.front());
      form.pending.erase(form.pending.begin());
    }
    if (form.pending.empty()) {
      if (form.prefix.size() <= max_len && !form.prefix.empty()) {
        out[form.prefix] += form.prob;
      }
      continue;
    }
    // lower bound on the final length
    std::size_t bound = form.prefix.size();
    for (const std::string& sym : form.pending) {
      bound += g.terminals.count(sym)
                   ? 1
                   : static_cast<std::size_t>(min_yield.at(sym));
    }
    if (bound > max_len || form.prob < 1e-18) continue;

    const std::string head = form.pending.front();
    for (const Production& p : g.productions) {
      if (p.lhs != head) continue;
      SententialForm next = form;
      next.pending.erase(next.pending.begin());
      next.pending.insert(next.pending.begin(), p.rhs.begin(), p.rhs.end());
      next.prob = form.prob * p.prob;
      stack.push_back(std::move(next));
    }
  }
  return out;
}

namespace {

StmtList random_body(RngStream& rng, int& budget, bool constructs, int depth);

Stmt random_stmt(RngStream& rng, int& budget, bool constructs, int depth) {
  const ActionKind kinds[] = {ActionKind::Move, ActionKind::TurnLeft,
                              ActionKind::TurnRight};
  if (constructs && depth < 2 && budget >= 2 && rng.uniform_int(4) == 0) {
    if (rng.uniform_int(2) == 0) {
      --budget;
      return make_repeat(random_body(rng, budget, constructs, depth + 1));
    }
    const CondKind conds[] = {CondKind::PathAhead, CondKind::PathLeft,
                              CondKind::PathRight};
    const CondKind cond = conds[rng.uniform_int(3)];
    --budget;
    StmtList then_body = random_body(rng, budget, constructs, depth + 1);
    if (budget >= 1 && rng.uniform_int(3) != 0) {
      return make_if_else(cond, std::move(then_body),
                          random_body(rng, budget, constructs, depth + 1));
    }
    return make_if(cond, std::move(then_body));
  }
  --budget;
  return make_action(kinds[rng.uniform_int(3)]);
}

StmtList random_body(RngStream& rng, int& budget, bool constructs, int depth) {
  StmtList body;
  const int want = 1 + static_cast<int>(rng.uniform_int(3));
  for (int i = 0; i < want && budget > 0; ++i) {
    body.push_back(random_stmt(rng, budget, constructs, depth));
  }
  if (body.empty()) body.push_back(make_move());
  return body;
}

}  // namespace

ProgramAst random_program(RngStream& rng, int max_actions, bool constructs) {
  int budget = 1 + static_cast<int>(rng.uniform_int(
                        static_cast<std::uint64_t>(max_actions)));
  ProgramAst ast;
  while (budget > 0) {
    ast.body.push_back(random_stmt(rng, budget, constructs, 0));
  }
  return ast;
}

Pcfg random_grammar(RngStream& rng) {
  Pcfg g;
  const int nt_count = 2 + static_cast<int>(rng.uniform_int(4));  // 2..5
  std::vector<std::string> nts;
  for (int i = 0; i < nt_count; ++i) {
    nts.push_back("N" + std::to_string(i));
    g.nonterminals.insert(nts.back());
  }
  g.start = nts.front();
  const std::vector<std::string> terms = {"a", "b", "c"};
  for (const std::string& t : terms) g.terminals.insert(t);

  int rule_budget = nt_count + static_cast<int>(rng.uniform_int(
                                   static_cast<std::uint64_t>(
                                       11 - nt_count)));  // <= 10
  for (int i = 0; i < nt_count; ++i) {
    const int rules_here =
        std::min(rule_budget - (nt_count - i - 1),
                 1 + static_cast<int>(rng.uniform_int(3)));
    std::vector<double> weights;
    for (int r = 0; r < rules_here; ++r) {
      weights.push_back(0.1 + rng.uniform01());
    }
    double total = 0.0;
    for (double w : weights) total += w;

    for (int r = 0; r < rules_here; ++r) {
      std::vector<std::string> rhs;
      if (r == 0) {
        // keep every nonterminal productive
        rhs.push_back(terms[rng.uniform_int(3)]);
      } else {
        const int len = 1 + static_cast<int>(rng.uniform_int(3));  // 1..3
        for (int s = 0; s < len; ++s) {
          if (rng.uniform_int(2) == 0) {
            rhs.push_back(terms[rng.uniform_int(3)]);
          } else {
            // unit cycles are avoided by only referencing later symbols in
            // single-symbol rules
            if (len == 1) {
              if (i + 1 < nt_count) {
                rhs.push_back(
                    nts[i + 1 + rng.uniform_int(
                                    static_cast<std::uint64_t>(
                                        nt_count - i - 1))]);
              } else {
                rhs.push_back(terms[rng.uniform_int(3)]);
              }
            } else {
              rhs.push_back(nts[rng.uniform_int(
                  static_cast<std::uint64_t>(nt_count))]);
            }
          }
        }
      }
      g.productions.push_back({nts[i], std::move(rhs), weights[r] / total});
    }
    rule_budget -= rules_here;
  }
  g.validate();
  return g;
}

}  // namespace ssyn::oracle
