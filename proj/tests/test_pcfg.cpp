#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "ssyn/pcfg.hpp"

using namespace ssyn;

namespace {

Pcfg tiny(const std::string& start, std::vector<Production> rules) {
  Pcfg g;
  g.start = start;
  for (const Production& p : rules) g.nonterminals.insert(p.lhs);
  for (const Production& p : rules) {
    for (const std::string& s : p.rhs) {
      if (!g.nonterminals.count(s)) g.terminals.insert(s);
    }
  }
  g.productions = std::move(rules);
  g.validate();
  return g;
}

// Compares CYK against exhaustive enumeration on every string up to
// max_len over the grammar's terminals.
void check_inside_matches_enumeration(const Pcfg& g, std::size_t max_len) {
  const CnfPcfg cnf = to_cnf(g);
  const auto table = oracle::enumerate_strings(g, max_len);
  const std::vector<std::string> terms(g.terminals.begin(),
                                       g.terminals.end());
  std::vector<std::vector<std::string>> strings = {{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::vector<std::string>> next;
    for (const auto& s : strings) {
      if (s.size() != len - 1) continue;
      for (const std::string& t : terms) {
        auto u = s;
        u.push_back(t);
        next.push_back(u);
      }
    }
    for (const auto& s : next) {
      const auto it = table.find(s);
      const double expected = it == table.end() ? 0.0 : it->second;
      CHECK(std::abs(inside_probability(cnf, s) - expected) < 1e-9);
    }
    strings.insert(strings.end(), next.begin(), next.end());
  }
}

}  // namespace

TEST_CASE("grammar validation") {
  CHECK_THROWS(tiny("S", {{"S", {"a"}, 0.5}}));          // sums to 0.5
  CHECK_THROWS(tiny("S", {{"S", {}, 1.0}}));             // empty rhs
  CHECK_THROWS(tiny("S", {{"S", {"a"}, 0.0}}));          // zero probability
  CHECK_NOTHROW(tiny("S", {{"S", {"a"}, 0.4}, {"S", {"b"}, 0.6}}));
}

TEST_CASE("grammar json round trip") {
  const Pcfg g = tiny("S", {{"S", {"a", "S"}, 0.3}, {"S", {"b"}, 0.7}});
  const Pcfg back = Pcfg::from_json(g.to_json());
  CHECK(back.start == g.start);
  CHECK(back.productions == g.productions);
  CHECK_THROWS(Pcfg::from_json(R"({"start":"S","rules":[
      {"lhs":"S","rhs":["a"],"p":0.5}]})"));
}

TEST_CASE("cnf conversion shapes") {
  // an already binary grammar converts to itself
  const Pcfg binary = tiny("S", {{"S", {"A", "B"}, 1.0},
                                 {"A", {"a"}, 1.0},
                                 {"B", {"b"}, 1.0}});
  const CnfPcfg same = to_cnf(binary);
  CHECK(same.productions.size() == 3);

  // S -> a b splits through fresh terminal wrappers with probability 1
  const CnfPcfg split = to_cnf(tiny("S", {{"S", {"a", "b"}, 1.0}}));
  CHECK(split.productions.size() == 3);
  double product = 1.0;
  for (const Production& p : split.productions) product *= p.prob;
  CHECK(product == 1.0);
  CHECK(inside_probability(split, {"a", "b"}) == doctest::Approx(1.0));
}

TEST_CASE("inside probability on hand grammars") {
  const CnfPcfg pick = to_cnf(tiny("S", {{"S", {"a"}, 0.4},
                                         {"S", {"b"}, 0.6}}));
  CHECK(inside_probability(pick, {"a"}) == doctest::Approx(0.4));

  // one derivation tree: S -> S S -> a a, probability 0.5^3
  const CnfPcfg rec = to_cnf(tiny("S", {{"S", {"S", "S"}, 0.5},
                                        {"S", {"a"}, 0.5}}));
  CHECK(inside_probability(rec, {"a", "a"}) == doctest::Approx(0.125));

  CHECK_THROWS_AS(inside_probability(rec, {"z"}), std::invalid_argument);
  CHECK_THROWS_AS(inside_probability(rec, {}), std::invalid_argument);

  // token known but no derivation
  const CnfPcfg ab = to_cnf(tiny("S", {{"S", {"a", "b"}, 1.0}}));
  CHECK(inside_probability(ab, {"b"}) == 0.0);
  CHECK(inside_probability(ab, {"a", "b"}) == doctest::Approx(1.0));
}

TEST_CASE("unit rules with cycles resolve exactly") {
  // A -> B (0.5) | a (0.5); B -> A (0.6) | b (0.4)
  // inside(a) = 0.5 / (1 - 0.3) = 5/7, inside(b) = 0.2 / 0.7 = 2/7
  const Pcfg g = tiny("A", {{"A", {"B"}, 0.5},
                            {"A", {"a"}, 0.5},
                            {"B", {"A"}, 0.6},
                            {"B", {"b"}, 0.4}});
  const CnfPcfg cnf = to_cnf(g);
  CHECK(inside_probability(cnf, {"a"}) == doctest::Approx(5.0 / 7.0));
  CHECK(inside_probability(cnf, {"b"}) == doctest::Approx(2.0 / 7.0));

  // a cycle holding all the mass never terminates
  CHECK_THROWS(to_cnf(tiny("A", {{"A", {"B"}, 1.0}, {"B", {"A"}, 1.0}})));
}

TEST_CASE("cnf conversion preserves string probabilities") {
  RngStream rng(2024);
  for (int i = 0; i < 20; ++i) {
    check_inside_matches_enumeration(oracle::random_grammar(rng), 5);
  }
}

TEST_CASE("duplicate and reordered rules do not change inside values") {
  const Pcfg g = tiny("S", {{"S", {"a", "S"}, 0.3}, {"S", {"b"}, 0.7}});
  Pcfg doubled = g;
  doubled.productions = {{"S", {"b"}, 0.35},
                         {"S", {"a", "S"}, 0.3},
                         {"S", {"b"}, 0.35}};
  const CnfPcfg c1 = to_cnf(g);
  const CnfPcfg c2 = to_cnf(doubled);
  for (const auto& s : std::vector<std::vector<std::string>>{
           {"b"}, {"a", "b"}, {"a", "a", "b"}}) {
    CHECK(std::abs(inside_probability(c1, s) - inside_probability(c2, s)) <
          1e-9);
  }
}

TEST_CASE("sampling") {
  SUBCASE("deterministic grammar") {
    const Pcfg g = tiny("S", {{"S", {"a"}, 1.0}});
    RngStream rng(1);
    for (int i = 0; i < 5; ++i) {
      const SampleResult s = sample(g, rng);
      REQUIRE(s.ok);
      CHECK(s.tokens == std::vector<std::string>{"a"});
      CHECK(s.derivation_probability == 1.0);
      CHECK(s.rule_count == 1);
    }
  }
  SUBCASE("law of large numbers") {
    const Pcfg g = tiny("S", {{"S", {"a"}, 0.4}, {"S", {"b"}, 0.6}});
    RngStream rng(7);
    int a_count = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      const SampleResult s = sample(g, rng);
      REQUIRE(s.ok);
      if (s.tokens.front() == "a") ++a_count;
    }
    CHECK(std::abs(a_count / static_cast<double>(n) - 0.4) < 0.02);
  }
  SUBCASE("non-terminating grammar hits the depth cap") {
    const Pcfg g = tiny("S", {{"S", {"S", "S"}, 1.0}});
    RngStream rng(3);
    for (int i = 0; i < 10; ++i) {
      CHECK_FALSE(sample(g, rng, 50).ok);
    }
  }
  SUBCASE("derivation probability equals inside on an unambiguous grammar") {
    const Pcfg g = tiny("S", {{"S", {"a", "S"}, 0.7}, {"S", {"b"}, 0.3}});
    const CnfPcfg cnf = to_cnf(g);
    RngStream rng(11);
    for (int i = 0; i < 50; ++i) {
      const SampleResult s = sample(g, rng);
      if (!s.ok) continue;
      CHECK(std::abs(s.derivation_probability -
                     inside_probability(cnf, s.tokens)) < 1e-9);
    }
  }
}

TEST_CASE("normalized score") {
  CHECK(normalized_score(0.25, 2) == doctest::Approx(0.5));
  CHECK(normalized_score(1.0, 5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(normalized_score(0.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(normalized_score(0.5, 0), std::invalid_argument);
  // ranking by normalized score agrees with raw probability at equal rule
  // counts
  CHECK((normalized_score(0.2, 4) > normalized_score(0.1, 4)) ==
        (0.2 > 0.1));
}
