#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ssyn/rng.hpp"

namespace ssyn {

struct Production {
  std::string lhs;
  std::vector<std::string> rhs;  // nonempty; mixes terminals and nonterminals
  double prob = 0.0;             // in (0, 1]
};

bool operator==(const Production& a, const Production& b);

// Weighted context-free grammar. Per nonterminal with at least one
// production, outgoing probabilities sum to 1 within kProbTolerance.
struct Pcfg {
  std::string start;
  std::set<std::string> nonterminals;
  std::set<std::string> terminals;
  std::vector<Production> productions;

  // Throws std::invalid_argument when any invariant is violated.
  void validate() const;

  std::string to_json() const;
  static Pcfg from_json(const std::string& text);
};

inline constexpr double kProbTolerance = 1e-9;

// Same fields, but every production is either A -> B C over nonterminals or
// A -> t with a single terminal.
struct CnfPcfg {
  std::string start;
  std::set<std::string> nonterminals;
  std::set<std::string> terminals;
  std::vector<Production> productions;

  void validate() const;
};

// Weighted-language-preserving conversion; the grammar must not derive the
// empty string (rules with empty right-hand sides are rejected).
CnfPcfg to_cnf(const Pcfg& g);

// Total probability over all derivations of `tokens` (CYK inside algorithm,
// computed in log space). Tokens must be nonempty and drawn from the
// grammar's terminal set; unknown tokens raise std::invalid_argument.
double inside_probability(const CnfPcfg& g,
                          const std::vector<std::string>& tokens);

// Log-space variant; std::nullopt encodes probability zero.
std::optional<double> log_inside_probability(
    const CnfPcfg& g, const std::vector<std::string>& tokens);

struct SampleResult {
  bool ok = false;  // false: expansion exceeded max_depth (retryable)
  std::vector<std::string> tokens;
  double derivation_probability = 1.0;
  int rule_count = 0;
};

// Leftmost top-down expansion choosing productions with their probabilities.
SampleResult sample(const Pcfg& g, RngStream& rng, int max_depth = 50);

// Geometric-mean per-rule probability, used to rank sampled codes of
// different lengths.
double normalized_score(double derivation_probability, int rule_count);

}  // namespace ssyn
