#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "ssyn/behavior.hpp"
#include "ssyn/code_json.hpp"
#include "ssyn/symss.hpp"
#include "ssyn/task.hpp"
#include "ssyn/tokens.hpp"

using namespace ssyn;

namespace {

std::string data_path(const std::string& rel) {
  return std::string(SSYN_DATA_DIR) + "/" + rel;
}

const BehaviorRegistry& registry() {
  static const BehaviorRegistry reg =
      BehaviorRegistry::load(data_path("behavior_types.json"));
  return reg;
}

MazeTask task(const std::string& id) {
  return load_task(data_path("tasks/" + id + ".task"));
}

ProgramAst solution(const std::string& id) {
  return load_code_file(data_path("tasks/" + id + ".solution.json"));
}

}  // namespace

TEST_CASE("omission grammar start rules for a three-turn solution") {
  GrammarCreator creator("T4", registry());
  const Pcfg g =
      creator.create_grammar(task("T4x"), solution("T4x"), "ForgottenTurns");

  std::vector<Production> start_rules;
  for (const Production& p : g.productions) {
    if (p.lhs == g.start) start_rules.push_back(p);
  }
  // keep all / drop one of three / drop two of three / drop all three
  REQUIRE(start_rules.size() == 8);

  const double keep = 1.0 / 3.0;
  const double omit = 1.0 - keep;
  std::map<std::size_t, std::vector<double>> by_len;
  for (const Production& p : start_rules) {
    by_len[p.rhs.size()].push_back(p.prob);
  }
  // T4x has 3 turns and 5 moves: lengths 8, 7, 6, 5
  REQUIRE(by_len[8].size() == 1);
  CHECK(by_len[8][0] == keep * keep * keep);
  REQUIRE(by_len[7].size() == 3);
  for (double p : by_len[7]) CHECK(p == keep * keep * omit);
  REQUIRE(by_len[6].size() == 3);
  for (double p : by_len[6]) CHECK(p == keep * omit * omit);
  REQUIRE(by_len[5].size() == 1);
  CHECK(by_len[5][0] == omit * omit * omit);

  // noise tail: slot split 0.1, direct emission 0.7, replication 0.4 / 0.1
  for (const Production& p : g.productions) {
    if (p.lhs == g.start) continue;
    const bool is_slot = p.lhs.rfind("A_", 0) == 0;
    const bool is_rep = p.lhs.rfind("R_", 0) == 0;
    REQUIRE((is_slot || is_rep));
    const std::string own = p.lhs.substr(2);
    if (p.rhs.size() == 2) {
      CHECK(p.prob == (is_slot ? 0.1 : 0.4));
    } else if (p.rhs[0] == own) {
      CHECK(p.prob == (is_slot ? 0.7 : 0.4));
    } else {
      CHECK(p.prob == 0.1);
    }
  }
}

TEST_CASE("omission grammar with no turns degenerates to one start rule") {
  const MazeTask corridor = parse_task(
      "id: c\nstore: move, turnLeft, turnRight\nmax_blocks: 3\n>..*\n");
  const ProgramAst walk{{make_move(), make_move(), make_move()}};
  GrammarCreator creator("T4", registry());
  const Pcfg g = creator.create_grammar(corridor, walk, "ForgottenTurns");
  int starts = 0;
  for (const Production& p : g.productions) {
    if (p.lhs == g.start) {
      ++starts;
      CHECK(p.prob == 1.0);
    }
  }
  CHECK(starts == 1);
}

TEST_CASE("create_grammar rejects bad inputs") {
  GrammarCreator creator("T4", registry());
  CHECK_THROWS(creator.create_grammar(task("T4"), solution("T4"), "NoSuch"));
  // an unsolving "solution" violates the precondition
  CHECK_THROWS(creator.create_grammar(
      task("T4"), ProgramAst{{make_move()}}, "ForgottenTurns"));
}

TEST_CASE("created grammars pass validation and stay inside the store") {
  for (const std::string& ref : {std::string("T4"), std::string("T18")}) {
    GrammarCreator creator(ref, registry());
    for (const BehaviorType& type : creator.types()) {
      const Pcfg g = creator.create_grammar(task(ref), solution(ref), type.id);
      CHECK_NOTHROW(g.validate());
      const auto allowed = store_token_alphabet(task(ref).store);
      for (const std::string& t : g.terminals) CHECK(allowed.count(t) == 1);
    }
  }
}

TEST_CASE("likelihood facts") {
  GrammarCreator creator("T4", registry());
  const MazeTask t4 = task("T4");
  const ProgramAst s4 = solution("T4");

  SUBCASE("the solution itself has the keep-all mass at least") {
    const double p = creator.likelihood(t4, s4, "ForgottenTurns", s4);
    const double keep = 1.0 / 3.0;
    CHECK(p >= keep * keep * std::pow(0.7, 5));
  }
  SUBCASE("tokens outside the grammar give zero") {
    const ProgramAst looped{{make_repeat({make_move()})}};
    CHECK(creator.likelihood(t4, s4, "ForgottenTurns", looped) == 0.0);
  }
  SUBCASE("the omission grammar beats the random one on the omission attempt") {
    const ProgramAst fig1b{
        {make_move(), make_turn_left(), make_move(), make_move()}};
    const double forgot = creator.likelihood(t4, s4, "ForgottenTurns", fig1b);
    const double random = creator.likelihood(t4, s4, "RandomBlocks", fig1b);
    CHECK(forgot > 0.0);
    CHECK(forgot > random);
  }
}

TEST_CASE("type inference") {
  GrammarCreator creator("T4", registry());
  const MazeTask t4 = task("T4");
  const ProgramAst s4 = solution("T4");

  SUBCASE("the dropped-turn attempt lands on the omission type") {
    const ProgramAst fig1b{
        {make_move(), make_turn_left(), make_move(), make_move()}};
    const InferenceResult r = creator.infer_type(t4, s4, fig1b);
    REQUIRE(r.type_id.has_value());
    CHECK(*r.type_id == "ForgottenTurns");
    CHECK(r.scores.size() == 6);
  }
  SUBCASE("an empty program is undetermined") {
    const InferenceResult r = creator.infer_type(t4, s4, ProgramAst{});
    CHECK_FALSE(r.type_id.has_value());
    for (const TypeScore& s : r.scores) {
      CHECK_FALSE(s.log_likelihood.has_value());
    }
  }
}

TEST_CASE("every sampled yield re-nests into a store-valid program") {
  for (const std::string& ref : {std::string("T4"), std::string("T18")}) {
    GrammarCreator creator(ref, registry());
    const MazeTask t = task(ref);
    const ProgramAst s = solution(ref);
    for (const BehaviorType& type : creator.types()) {
      const Pcfg g = creator.create_grammar(t, s, type.id);
      RngStream rng(RngStream::hash_string(ref + type.id));
      int produced = 0;
      for (int i = 0; i < 10000; ++i) {
        const SampleResult sample_result = sample(g, rng, kSampleMaxDepth);
        if (!sample_result.ok) continue;
        ++produced;
        const ProgramAst code = detokenize(sample_result.tokens);
        CHECK(is_valid_attempt(t, code).ok);
      }
      CHECK(produced > 9000);
    }
  }
}

TEST_CASE("synthesis output is deduplicated and ranked") {
  GrammarCreator creator("T4", registry());
  RngStream rng(5);
  const auto ranked = creator.synthesize_attempt(task("T4x"), solution("T4x"),
                                                 "ForgottenTurns", rng, 1000);
  REQUIRE(!ranked.empty());
  for (std::size_t i = 0; i + 1 < ranked.size(); ++i) {
    CHECK(ranked[i].score >= ranked[i + 1].score);
    for (std::size_t j = i + 1; j < ranked.size(); ++j) {
      CHECK(ranked[i].code != ranked[j].code);
    }
  }
  for (const SynthesizedCode& c : ranked) {
    CHECK(is_valid_attempt(task("T4x"), c.code).ok);
  }
  // the straight-line walk is the most likely omission attempt
  StmtList five_moves;
  for (int i = 0; i < 5; ++i) five_moves.push_back(make_move());
  CHECK(ranked.front().code == ProgramAst{five_moves});
}

TEST_CASE("a deterministic grammar synthesizes a single code") {
  const MazeTask corridor = parse_task(
      "id: c\nstore: move, turnLeft, turnRight\nmax_blocks: 3\n>..*\n");
  const ProgramAst walk{{make_move(), make_move(), make_move()}};
  GrammarCreator creator("T4", registry());
  RngStream rng(8);
  // partial progress over a turnless walk still varies by prefix length,
  // so use the omission template whose lattice collapses to one rule; its
  // noise still varies yields, so check determinism on scores instead
  const auto ranked = creator.synthesize_attempt(corridor, walk,
                                                 "ForgottenTurns", rng, 200);
  CHECK(!ranked.empty());
  // with no turns the start rule is unique; the top yield is the walk
  CHECK(ranked.front().code == walk);
}

TEST_CASE("planted-type recovery across all registered grammars") {
  // fast spot check (the acceptance suite runs the full 50-sample version)
  for (const std::string& ref : {std::string("T4"), std::string("T18")}) {
    GrammarCreator creator(ref, registry());
    const MazeTask t = task(ref);
    const ProgramAst s = solution(ref);
    for (const BehaviorType& type : creator.types()) {
      const Pcfg g = creator.create_grammar(t, s, type.id);
      RngStream rng(RngStream::hash_string("spot" + ref + type.id));
      int hits = 0, total = 0;
      while (total < 15) {
        const SampleResult sampled = sample(g, rng, kSampleMaxDepth);
        if (!sampled.ok) continue;
        ++total;
        const InferenceResult r =
            creator.infer_type(t, s, detokenize(sampled.tokens));
        if (r.type_id && *r.type_id == type.id) ++hits;
      }
      CHECK_MESSAGE(hits >= 12, ref, "/", type.id, " recovered ", hits,
                    "/15");
    }
  }
}
