#include "ssyn/pcfg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace ssyn {

bool operator==(const Production& a, const Production& b) {
  return a.lhs == b.lhs && a.rhs == b.rhs && a.prob == b.prob;
}

namespace {

void validate_common(const std::string& start,
                     const std::set<std::string>& nonterminals,
                     const std::set<std::string>& terminals,
                     const std::vector<Production>& productions) {
  if (!nonterminals.count(start)) {
    throw std::invalid_argument("start symbol is not a declared nonterminal");
  }
  for (const std::string& t : terminals) {
    if (nonterminals.count(t)) {
      throw std::invalid_argument("symbol is both terminal and nonterminal: " +
                                  t);
    }
  }
  std::map<std::string, double> sums;
  for (const Production& p : productions) {
    if (!nonterminals.count(p.lhs)) {
      throw std::invalid_argument("production lhs is not a nonterminal: " +
                                  p.lhs);
    }
    if (p.rhs.empty()) {
      throw std::invalid_argument(
          "empty right-hand side (empty string derivations unsupported)");
    }
    if (!(p.prob > 0.0) || p.prob > 1.0) {
      throw std::invalid_argument("production probability outside (0, 1]");
    }
    for (const std::string& sym : p.rhs) {
      if (!nonterminals.count(sym) && !terminals.count(sym)) {
        throw std::invalid_argument("undeclared symbol on rhs: " + sym);
      }
    }
    sums[p.lhs] += p.prob;
  }
  for (const auto& [lhs, sum] : sums) {
    if (std::abs(sum - 1.0) > kProbTolerance) {
      throw std::invalid_argument("probabilities for " + lhs +
                                  " sum to " + std::to_string(sum));
    }
  }
}

}  // namespace

void Pcfg::validate() const {
  validate_common(start, nonterminals, terminals, productions);
}

void CnfPcfg::validate() const {
  validate_common(start, nonterminals, terminals, productions);
  for (const Production& p : productions) {
    const bool binary = p.rhs.size() == 2 && nonterminals.count(p.rhs[0]) &&
                        nonterminals.count(p.rhs[1]);
    const bool lexical = p.rhs.size() == 1 && terminals.count(p.rhs[0]);
    if (!binary && !lexical) {
      throw std::invalid_argument("production is not in CNF shape");
    }
  }
}

std::string Pcfg::to_json() const {
  nlohmann::ordered_json j;
  j["start"] = start;
  j["rules"] = nlohmann::ordered_json::array();
  for (const Production& p : productions) {
    nlohmann::ordered_json r;
    r["lhs"] = p.lhs;
    r["rhs"] = p.rhs;
    r["p"] = p.prob;
    j["rules"].push_back(std::move(r));
  }
  return j.dump(2);
}

Pcfg Pcfg::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Pcfg g;
  g.start = j.at("start").get<std::string>();
  for (const auto& r : j.at("rules")) {
    Production p;
    p.lhs = r.at("lhs").get<std::string>();
    p.rhs = r.at("rhs").get<std::vector<std::string>>();
    p.prob = r.at("p").get<double>();
    g.productions.push_back(std::move(p));
  }
  // Every lhs is a nonterminal; remaining rhs symbols are terminals.
  for (const Production& p : g.productions) g.nonterminals.insert(p.lhs);
  g.nonterminals.insert(g.start);
  for (const Production& p : g.productions) {
    for (const std::string& sym : p.rhs) {
      if (!g.nonterminals.count(sym)) g.terminals.insert(sym);
    }
  }
  g.validate();
  return g;
}

namespace {

// Gauss-Jordan inverse of (I - M) restricted to the unit-rule subgraph;
// U[a][b] is the total probability of deriving B from A through unit rules
// alone (including the empty path when a == b).
std::vector<std::vector<double>> unit_closure(
    const std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(2 * n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a[i][j] = (i == j ? 1.0 : 0.0) - m[i][j];
    }
    a[i][n + i] = 1.0;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-12) {
      throw std::invalid_argument(
          "unit-rule cycle with probability mass 1 (grammar never "
          "terminates)");
    }
    std::swap(a[col], a[pivot]);
    const double inv = 1.0 / a[col][col];
    for (std::size_t j = 0; j < 2 * n; ++j) a[col][j] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < 2 * n; ++j) a[r][j] -= f * a[col][j];
    }
  }
  std::vector<std::vector<double>> u(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) u[i][j] = a[i][n + j];
  }
  return u;
}

void merge_duplicates(std::vector<Production>& productions) {
  std::map<std::pair<std::string, std::vector<std::string>>, double> merged;
  std::vector<std::pair<std::string, std::vector<std::string>>> order;
  for (const Production& p : productions) {
    auto key = std::make_pair(p.lhs, p.rhs);
    if (!merged.count(key)) order.push_back(key);
    merged[key] += p.prob;
  }
  productions.clear();
  for (const auto& key : order) {
    productions.push_back({key.first, key.second, merged[key]});
  }
}

}  // namespace

CnfPcfg to_cnf(const Pcfg& g) {
  g.validate();

  CnfPcfg out;
  out.start = g.start;
  out.nonterminals = g.nonterminals;
  out.terminals = g.terminals;

  // TERM: wrap terminals appearing in long right-hand sides.
  std::map<std::string, std::string> term_wrapper;
  std::vector<Production> work;
  std::vector<Production> wrapper_rules;
  for (const Production& p : g.productions) {
    Production q = p;
    if (q.rhs.size() >= 2) {
      for (std::string& sym : q.rhs) {
        if (!g.terminals.count(sym)) continue;
        auto it = term_wrapper.find(sym);
        if (it == term_wrapper.end()) {
          std::string fresh = "_t:" + sym;
          while (out.nonterminals.count(fresh) || out.terminals.count(fresh)) {
            fresh += "'";
          }
          it = term_wrapper.emplace(sym, fresh).first;
          out.nonterminals.insert(fresh);
          wrapper_rules.push_back({fresh, {sym}, 1.0});
        }
        sym = it->second;
      }
    }
    work.push_back(std::move(q));
  }

  // BIN: split right-hand sides longer than two.
  std::vector<Production> binary;
  int chain_id = 0;
  for (const Production& p : work) {
    if (p.rhs.size() <= 2) {
      binary.push_back(p);
      continue;
    }
    std::string prev = p.rhs.front();
    std::vector<std::string> rest(p.rhs.begin() + 1, p.rhs.end());
    std::string lhs = p.lhs;
    double prob = p.prob;
    while (rest.size() > 1) {
      std::string fresh = "_b:" + std::to_string(chain_id++);
      out.nonterminals.insert(fresh);
      binary.push_back({lhs, {prev, fresh}, prob});
      lhs = fresh;
      prob = 1.0;
      prev = rest.front();
      rest.erase(rest.begin());
    }
    binary.push_back({lhs, {prev, rest.front()}, prob});
  }
  for (const Production& p : wrapper_rules) binary.push_back(p);

  // UNIT: close over A -> B chains; cycles are handled exactly through the
  // matrix inverse of the unit subgraph.
  std::vector<Production> unit_rules;
  std::vector<Production> solid;
  for (const Production& p : binary) {
    if (p.rhs.size() == 1 && out.nonterminals.count(p.rhs[0])) {
      unit_rules.push_back(p);
    } else {
      solid.push_back(p);
    }
  }
  if (!unit_rules.empty()) {
    std::vector<std::string> unit_nts;
    std::map<std::string, std::size_t> index;
    auto intern = [&](const std::string& s) {
      auto it = index.find(s);
      if (it != index.end()) return it->second;
      const std::size_t i = unit_nts.size();
      unit_nts.push_back(s);
      index.emplace(s, i);
      return i;
    };
    for (const Production& p : unit_rules) {
      intern(p.lhs);
      intern(p.rhs[0]);
    }
    const std::size_t n = unit_nts.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (const Production& p : unit_rules) {
      m[index[p.lhs]][index[p.rhs[0]]] += p.prob;
    }
    const auto u = unit_closure(m);

    std::vector<Production> closed;
    for (const Production& p : solid) {
      if (!index.count(p.lhs)) {
        closed.push_back(p);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (u[i][j] == 0.0) continue;
        for (const Production& p : solid) {
          if (p.lhs != unit_nts[j]) continue;
          closed.push_back({unit_nts[i], p.rhs, u[i][j] * p.prob});
        }
      }
    }
    solid = std::move(closed);
  }

  merge_duplicates(solid);
  for (Production& p : solid) {
    // The unit closure is exact up to floating point; clamp the noise.
    if (p.prob > 1.0 && p.prob < 1.0 + kProbTolerance) p.prob = 1.0;
  }
  out.productions = std::move(solid);
  out.validate();
  return out;
}

namespace {

double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

}  // namespace

std::optional<double> log_inside_probability(
    const CnfPcfg& g, const std::vector<std::string>& tokens) {
  if (tokens.empty()) {
    throw std::invalid_argument("token sequence must be nonempty");
  }
  for (const std::string& t : tokens) {
    if (!g.terminals.count(t)) {
      throw std::invalid_argument("unknown token '" + t + "'");
    }
  }

  std::vector<std::string> nts(g.nonterminals.begin(), g.nonterminals.end());
  std::map<std::string, int> nt_index;
  for (std::size_t i = 0; i < nts.size(); ++i) {
    nt_index[nts[i]] = static_cast<int>(i);
  }

  std::map<std::string, std::vector<std::pair<int, double>>> lexical;
  // (B, C) -> list of (A, prob)
  std::map<std::pair<int, int>, std::vector<std::pair<int, double>>> binary;
  for (const Production& p : g.productions) {
    if (p.rhs.size() == 1) {
      lexical[p.rhs[0]].push_back({nt_index[p.lhs], p.prob});
    } else {
      binary[{nt_index[p.rhs[0]], nt_index[p.rhs[1]]}].push_back(
          {nt_index[p.lhs], p.prob});
    }
  }

  const int n = static_cast<int>(tokens.size());
  const double neg_inf = -std::numeric_limits<double>::infinity();
  // chart[start][len-1] maps nonterminal -> log inside probability
  std::vector<std::vector<std::map<int, double>>> chart(
      n, std::vector<std::map<int, double>>(n));

  for (int i = 0; i < n; ++i) {
    auto it = lexical.find(tokens[i]);
    if (it == lexical.end()) continue;
    for (const auto& [a, prob] : it->second) {
      auto [cell, inserted] = chart[i][0].emplace(a, std::log(prob));
      if (!inserted) cell->second = log_sum_exp(cell->second, std::log(prob));
    }
  }

  for (int len = 2; len <= n; ++len) {
    for (int start = 0; start + len <= n; ++start) {
      auto& cell = chart[start][len - 1];
      for (int split = 1; split < len; ++split) {
        const auto& left = chart[start][split - 1];
        const auto& right = chart[start + split][len - split - 1];
        if (left.empty() || right.empty()) continue;
        for (const auto& [b, lp_b] : left) {
          for (const auto& [c, lp_c] : right) {
            auto it = binary.find({b, c});
            if (it == binary.end()) continue;
            const double lp_children = lp_b + lp_c;
            for (const auto& [a, prob] : it->second) {
              const double lp = std::log(prob) + lp_children;
              auto [slot, inserted] = cell.emplace(a, lp);
              if (!inserted) slot->second = log_sum_exp(slot->second, lp);
            }
          }
        }
      }
    }
  }

  const auto it = chart[0][n - 1].find(nt_index[g.start]);
  if (it == chart[0][n - 1].end() || it->second == neg_inf) {
    return std::nullopt;
  }
  return it->second;
}

double inside_probability(const CnfPcfg& g,
                          const std::vector<std::string>& tokens) {
  const auto lp = log_inside_probability(g, tokens);
  return lp ? std::exp(*lp) : 0.0;
}

SampleResult sample(const Pcfg& g, RngStream& rng, int max_depth) {
  std::map<std::string, std::vector<const Production*>> by_lhs;
  for (const Production& p : g.productions) {
    by_lhs[p.lhs].push_back(&p);
  }

  SampleResult result;
  bool truncated = false;

  // Leftmost expansion via an explicit stack of (symbol, depth).
  std::vector<std::pair<std::string, int>> stack;
  stack.push_back({g.start, 0});
  while (!stack.empty()) {
    auto [sym, depth] = stack.back();
    stack.pop_back();
    if (g.terminals.count(sym)) {
      result.tokens.push_back(sym);
      continue;
    }
    if (depth >= max_depth) {
      truncated = true;
      break;
    }
    const auto it = by_lhs.find(sym);
    if (it == by_lhs.end() || it->second.empty()) {
      throw std::invalid_argument("nonterminal without productions: " + sym);
    }
    std::vector<double> weights;
    weights.reserve(it->second.size());
    for (const Production* p : it->second) weights.push_back(p->prob);
    const Production* chosen = it->second[rng.pick_weighted(weights)];
    result.derivation_probability *= chosen->prob;
    result.rule_count += 1;
    for (auto r = chosen->rhs.rbegin(); r != chosen->rhs.rend(); ++r) {
      stack.push_back({*r, depth + 1});
    }
  }

  result.ok = !truncated;
  return result;
}

double normalized_score(double derivation_probability, int rule_count) {
  if (!(derivation_probability > 0.0) || derivation_probability > 1.0) {
    throw std::invalid_argument("derivation probability outside (0, 1]");
  }
  if (rule_count <= 0) throw std::invalid_argument("rule count must be positive");
  return std::exp(std::log(derivation_probability) /
                  static_cast<double>(rule_count));
}

}  // namespace ssyn
