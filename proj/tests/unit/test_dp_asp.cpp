#include "support.hpp"

#include "twsolve/dp_asp.hpp"
#include "twsolve/errors.hpp"
#include "twsolve/graph.hpp"

#include <doctest.h>

using namespace tw;

TEST_SUITE("dp_asp") {
  TEST_CASE("oracle on hand-made programs") {
    CHECK(enumerate_answer_sets(parse_program("a :- not a.\n")).answerSets.empty());
    const auto choice = enumerate_answer_sets(parse_program("a :- not b.\nb :- not a.\n"));
    CHECK(choice.answerSets == std::vector<std::vector<Var>>{{1}, {2}});
    const auto loop = enumerate_answer_sets(parse_program("a :- b.\nb :- a.\n"));
    CHECK(loop.answerSets == std::vector<std::vector<Var>>{{}});
    CHECK(enumerate_answer_sets(parse_program("a :- b.\nb :- a.\n:- not a.\n")).answerSets.empty());
    CHECK(enumerate_answer_sets(parse_program("a :- not b.\nb :- not a.\n"), 1).truncated);
  }

  TEST_CASE("oracle refuses large programs") {
    Program p;
    for (std::size_t i = 0; i <= kOracleMaxAtoms; ++i) p.atomNames.push_back("x" + std::to_string(i));
    CHECK_THROWS_AS(enumerate_answer_sets(p), Error);
  }

  TEST_CASE("normal dp on hand-made programs") {
    CHECK_FALSE(solve_normal_asp(parse_program("a :- not a.\n")));
    CHECK(solve_normal_asp(parse_program("a :- not b.\nb :- not a.\n")));
    CHECK(solve_normal_asp(parse_program("a :- b.\nb :- a.\n")));
    CHECK_FALSE(solve_normal_asp(parse_program("a :- b.\nb :- a.\n:- not a.\n")));
    CHECK(solve_normal_asp(parse_program("a :- b.\nb :- a.\nb :- not c.\n:- not a.\n")));
    CHECK(solve_normal_asp(Program{}));
  }

  TEST_CASE("completion of tight programs counts answer sets") {
    test::Rng rng(31);
    int tested = 0;
    for (int i = 0; i < 300 && tested < 80; ++i) {
      const Program p = test::random_program(rng, test::pick(rng, 1, 8), test::pick(rng, 1, 10));
      if (!is_tight(p).tight) continue;
      ++tested;
      const auto oracle = enumerate_answer_sets(p);
      CHECK(count_models(clark_completion(p)) == oracle.answerSets.size());
      CHECK(solve_tight_asp(p) == !oracle.answerSets.empty());
    }
    CHECK(tested > 20);
  }

  TEST_CASE("completion refuses non-tight programs") {
    try {
      clark_completion(parse_program("a :- b.\nb :- a.\n"));
      FAIL("expected NotTight");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotTight);
    }
  }

  TEST_CASE("completion report") {
    const Program p = parse_program("a :- b, c.\nb :- not c.\nc :- not b.\n");
    const CompletionReport r = completion_report(p, Heuristic::MinFill, 0);
    CHECK(r.largestRuleSize == 3);
    CHECK(r.auxiliaryVars == 3);
    CHECK(r.inputWidth == 2);
    CHECK(r.outputWidth >= r.inputWidth);
  }

  TEST_CASE("normal dp agrees with the oracle") {
    test::Rng rng(32);
    for (int i = 0; i < 200; ++i) {
      const Program p = test::random_program(rng, test::pick(rng, 1, 8), test::pick(rng, 1, 12));
      const bool expected = !enumerate_answer_sets(p, 1).answerSets.empty();
      AspDpStats stats;
      CHECK(solve_normal_asp(p, Heuristic::MinFill, 0, &stats) == expected);
      for (const auto& node : stats.perNode) CHECK(node.rows <= asp_row_bound(node.bagSize));
      CHECK(has_answer_set(p, AspMode::Auto) == expected);
      CHECK(has_answer_set(p, AspMode::Normal, Heuristic::MinDegree, 4) == expected);
    }
  }

  TEST_CASE("row bound") {
    CHECK(asp_row_bound(0) == 1);
    CHECK(asp_row_bound(1) == 4);
    CHECK(asp_row_bound(3) == 64 * 6);
    CHECK(asp_row_bound(40) == std::numeric_limits<std::uint64_t>::max());
  }

  TEST_CASE("normal dp rejects foreign decompositions") {
    const Program p = parse_program("a :- b.\nb :- c.\n");
    const NiceTreeDecomposition ntd = make_nice(decompose(PrimalGraph(3), Heuristic::MinFill));
    CHECK_THROWS_AS(solve_normal_asp(p, ntd), Error);
  }
}
