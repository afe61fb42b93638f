#include "support.hpp"

#include "twsolve/dg_reduce.hpp"
#include "twsolve/dp_asp.hpp"
#include "twsolve/errors.hpp"
#include "twsolve/graph.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace tw;

namespace {

NiceTreeDecomposition nice_for(const Program& p, Heuristic h = Heuristic::MinFill, std::uint64_t seed = 0) {
  const PrimalGraph g = primal_graph(p);
  return make_nice(decompose(g, h, seed), g);
}

/// Emits one fresh variable per node and a clause over a variable it does not own.
class LeakyEncoder final : public NodeEncoder {
 public:
  std::string_view name() const override { return "leaky"; }
  std::size_t reserved_vars() const override { return 0; }
  NodeEncoderOutput encode(const NodeEncodingContext& ctx) override {
    NodeEncoderOutput out;
    const Var v = ctx.pool.fresh();
    out.outputBag = {v};
    if (!ctx.children.empty()) out.localClauses.push_back({Literal::pos(v), Literal::pos(ctx.children[0]->outputBag[0])});
    return out;
  }
};

}  // namespace

TEST_SUITE("dg_reduce") {
  TEST_CASE("empty program") {
    const DgReductionOutput r = reduce_asp_to_sat(Program{}, nice_for(Program{}));
    CHECK(r.formula.numVars == 0);
    CHECK(r.formula.clauses.empty());
    CHECK(r.outputTd.node_count() == 1);
    CHECK(r.certificate.outputWidth == -1);
    CHECK(verify_guided(r));
  }

  TEST_CASE("odd loop has no model") {
    const Program p = parse_program("a :- not a.\n");
    CHECK_FALSE(test::cdcl_satisfiable(reduce_asp_to_sat(p, nice_for(p)).formula));
  }

  TEST_CASE("unfounded positive loop is rejected") {
    const Program p = parse_program("a :- b.\nb :- a.\n:- not a.\n");
    const DgReductionOutput r = reduce_asp_to_sat(p, nice_for(p));
    CHECK(r.certificate.counters);
    CHECK_FALSE(test::cdcl_satisfiable(r.formula));
    const Program q = parse_program("a :- b.\nb :- a.\nb :- not c.\n:- not a.\n");
    CHECK(test::cdcl_satisfiable(reduce_asp_to_sat(q, nice_for(q)).formula));
  }

  TEST_CASE("tight programs skip level counters") {
    const Program p = parse_program("a :- not b.\nb :- not a.\nc :- a.\n");
    const DgReductionOutput r = reduce_asp_to_sat(p, nice_for(p));
    CHECK_FALSE(r.certificate.counters);
    for (const auto& row : r.perNode) CHECK(row.bits == 0);
    CHECK(test::cdcl_satisfiable(r.formula));
  }

  TEST_CASE("satisfiability matches answer-set existence") {
    test::Rng rng(41);
    for (int i = 0; i < 120; ++i) {
      const Program p = test::random_program(rng, test::pick(rng, 1, 8), test::pick(rng, 1, 12));
      const Heuristic h = i % 2 ? Heuristic::MinFill : Heuristic::MinDegree;
      const DgReductionOutput r = reduce_asp_to_sat(p, nice_for(p, h, static_cast<std::uint64_t>(i % 3)));
      const bool expected = !enumerate_answer_sets(p, 1).answerSets.empty();
      CHECK(test::cdcl_satisfiable(r.formula) == expected);
      std::vector<std::string> problems;
      CHECK(verify_guided(r, &problems));
      CHECK(problems.empty());
      CHECK(r.certificate.boundHolds);
    }
  }

  TEST_CASE("output keeps the input tree") {
    const Program p = parse_program("a :- b, not c.\nb :- a.\nc :- not a.\nd :- c, b.\n");
    const NiceTreeDecomposition ntd = nice_for(p);
    const DgReductionOutput r = reduce_asp_to_sat(p, ntd);
    REQUIRE(r.outputTd.node_count() == ntd.nodes.size());
    CHECK(r.outputTd.root == ntd.root());
    CHECK(r.outputTd.edges == ntd.as_tree_decomposition().edges);
    for (std::size_t t = 0; t < ntd.nodes.size(); ++t) CHECK(r.perNode[t].inputBagSize == ntd.nodes[t].bag.size());
  }

  TEST_CASE("plain decompositions are made nice first") {
    const Program p = parse_program("a :- b.\nb :- a.\nb :- not c.\n");
    const TreeDecomposition td = decompose(primal_graph(p), Heuristic::MinFill);
    const DgReductionOutput r = reduce_asp_to_sat(p, td);
    CHECK(verify_guided(r));
    CHECK(test::cdcl_satisfiable(r.formula));
  }

  TEST_CASE("invalid input decompositions") {
    const Program p = parse_program("a :- b.\nb :- c.\n");
    TreeDecomposition td{3, {{0, 1}, {2}}, {{0, 1}}, 0};
    try {
      reduce_asp_to_sat(p, td);
      FAIL("expected InvalidInputDecomposition");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidInputDecomposition);
    }
  }

  TEST_CASE("clauses outside their bag are caught at emission") {
    const Program p = parse_program("a :- b.\n");
    LeakyEncoder leaky;
    CHECK_THROWS_AS(run_dg_reduction(nice_for(p), leaky), std::logic_error);
  }

  TEST_CASE("verification catches inflated bags") {
    const Program p = parse_program("a :- b.\nb :- a.\nc :- not a.\n");
    DgReductionOutput r = reduce_asp_to_sat(p, nice_for(p));
    REQUIRE(verify_guided(r));
    const std::size_t extra = 40;
    for (auto& bag : r.outputTd.bags) {
      for (std::size_t i = 0; i < extra; ++i) bag.push_back(r.formula.numVars + i);
    }
    r.formula.numVars += extra;
    r.outputTd.vertexCount += extra;
    std::vector<std::string> problems;
    CHECK_FALSE(verify_guided(r, &problems));
    CHECK_FALSE(problems.empty());
  }

  TEST_CASE("verification catches a broken decomposition") {
    const Program p = parse_program("a :- b.\nb :- not a.\n");
    DgReductionOutput r = reduce_asp_to_sat(p, nice_for(p));
    for (auto& bag : r.outputTd.bags) bag.clear();
    CHECK_FALSE(verify_guided(r));
  }

  TEST_CASE("counter bits") {
    CHECK(counter_bits(0) == 0);
    CHECK(counter_bits(1) == 1);
    CHECK(counter_bits(3) == 2);
    CHECK(counter_bits(4) == 3);
  }
}
