#include "twsolve/dp_asp.hpp"
#include "twsolve/dp_sat.hpp"
#include "twsolve/graph.hpp"
#include "twsolve/hybrid.hpp"
#include "twsolve/treedecomp.hpp"

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <string>

using namespace tw;

namespace {

// Random 3-CNF over a band of `width` consecutive variables, so the primal
// graph has bandwidth (and treewidth) at most width.
CnfFormula banded_cnf(std::size_t n, std::size_t width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CnfFormula cnf;
  cnf.numVars = static_cast<Var>(n);
  std::uniform_int_distribution<std::size_t> offset(0, width);
  std::bernoulli_distribution sign(0.5);
  for (std::size_t i = 0; i + width < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      Clause clause;
      for (int l = 0; l < 3; ++l) {
        const Var v = static_cast<Var>(i + offset(rng) + 1);
        if (std::none_of(clause.begin(), clause.end(), [v](Literal x) { return x.var() == v; })) {
          clause.push_back(sign(rng) ? Literal::pos(v) : Literal::neg(v));
        }
      }
      cnf.clauses.push_back(clause);
    }
  }
  return cnf;
}

// Positive cycle through k atoms with a choice on the first one.
Program cycle_program(std::size_t k) {
  Program p;
  for (std::size_t a = 1; a <= k + 1; ++a) p.atomNames.push_back("a" + std::to_string(a));
  for (std::size_t a = 1; a <= k; ++a) {
    Rule r;
    r.head = static_cast<Var>(a);
    r.posBody = {static_cast<Var>(a % k + 1)};
    p.rules.push_back(r);
  }
  Rule choice;
  choice.head = 1;
  choice.negBody = {static_cast<Var>(k + 1)};
  p.rules.push_back(choice);
  Rule other;
  other.head = static_cast<Var>(k + 1);
  other.negBody = {1};
  p.rules.push_back(other);
  return p;
}

void BM_Decompose(benchmark::State& state) {
  const PrimalGraph g = primal_graph(banded_cnf(static_cast<std::size_t>(state.range(0)), 8, 1));
  for (auto _ : state) benchmark::DoNotOptimize(decompose(g, Heuristic::MinFill, 0));
}
BENCHMARK(BM_Decompose)->Arg(100)->Arg(400)->Arg(1600);

void BM_CountBanded(benchmark::State& state) {
  const CnfFormula cnf = banded_cnf(200, static_cast<std::size_t>(state.range(0)), 2);
  const NiceTreeDecomposition ntd = decompose_formula(cnf, Heuristic::MinFill, 0);
  for (auto _ : state) benchmark::DoNotOptimize(count_models(cnf, ntd));
}
BENCHMARK(BM_CountBanded)->DenseRange(2, 12, 2);

// A clause over the first `core` variables on top of a banded tail: high
// width, but removing the core leaves a narrow remainder.
CnfFormula wide_core(std::size_t core, std::size_t n) {
  CnfFormula cnf = banded_cnf(n, 4, 3);
  Clause wide;
  for (Var v = 1; v <= static_cast<Var>(core); ++v) wide.push_back(v % 2 ? Literal::pos(v) : Literal::neg(v));
  cnf.clauses.push_back(wide);
  return cnf;
}

void BM_HybridWideCore(benchmark::State& state) {
  const CnfFormula cnf = wide_core(24, 120);
  SolverConfig cfg;
  cfg.widthThreshold = static_cast<std::size_t>(state.range(0));
  cfg.maxNestingDepth = 1;
  for (auto _ : state) benchmark::DoNotOptimize(hybrid_count(cnf, cfg));
}
BENCHMARK(BM_HybridWideCore)->Arg(4)->Arg(8);

void BM_NormalAsp(benchmark::State& state) {
  const Program p = cycle_program(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_normal_asp(p));
}
BENCHMARK(BM_NormalAsp)->DenseRange(4, 16, 4);

}  // namespace

BENCHMARK_MAIN();
