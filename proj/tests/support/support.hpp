#pragma once

#include "twsolve/dp_sat.hpp"
#include "twsolve/graph.hpp"
#include "twsolve/model.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace tw::test {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi].
std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi);

/// Clause lengths uniform in [1, maxLen]; literals over 1..numVars without repeats.
CnfFormula random_cnf(Rng& rng, std::size_t numVars, std::size_t numClauses, std::size_t maxLen);

/// Rules with at most `maxRuleAtoms` distinct atoms; about one in eight is a constraint.
Program random_program(Rng& rng, std::size_t atoms, std::size_t rules, std::size_t maxRuleAtoms = 3);

PrimalGraph random_tree(Rng& rng, std::size_t n);
PrimalGraph complete_graph(std::size_t n);

/// One clause over 32 core variables, implication chains among them and a
/// sparse tail loosely tied to the core; at most 60 variables.
CnfFormula high_width_instance(std::uint64_t seed);

/// Non-tight program over atoms a1..ak: a_i :- a_j for i < j, closed into a
/// positive cycle by a_k :- a_1. Its primal graph is the clique K_k.
Program ordering_program(std::size_t k);

// Independent oracles.

/// Conflict-driven clause learning; independent of every solving path in core.
bool cdcl_satisfiable(const CnfFormula& cnf);

/// Exact model count by branching with unit propagation, component splitting
/// and a component cache.
BigInt component_count(const CnfFormula& cnf);

std::string read_file(const std::string& path);

}  // namespace tw::test
