#pragma once

#include "twsolve/dp_sat.hpp"
#include "twsolve/model.hpp"
#include "twsolve/treedecomp.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace tw {

// ---------------------------------------------------------------------------
// reference semantics

struct StableModelOracleResult {
  std::vector<std::vector<Var>> answerSets;  // each sorted; sets in increasing bitmask order
  bool truncated = false;                    // stopped after `limit` answer sets
};

inline constexpr std::size_t kOracleMaxAtoms = 20;

/// Enumerates all atom subsets and keeps those that satisfy every rule and
/// equal the least model of their Gelfond-Lifschitz reduct.
/// TooLargeForOracle above kOracleMaxAtoms atoms.
StableModelOracleResult enumerate_answer_sets(const Program& program,
                                              std::size_t limit = std::numeric_limits<std::size_t>::max());

// ---------------------------------------------------------------------------
// tight programs

/// Completion with one auxiliary variable per non-fact rule body, numbered
/// after the atoms in rule order. Models projected onto the atoms are the
/// supported models; for tight programs these are exactly the answer sets,
/// and the auxiliaries are functionally determined, so the model count equals
/// the number of answer sets. NotTight if the program is not tight.
CnfFormula clark_completion(const Program& program);

struct CompletionReport {
  long inputWidth = -1;   // heuristic width of the program's primal graph
  long outputWidth = -1;  // heuristic width of the completion's primal graph
  std::size_t largestRuleSize = 0;
  std::size_t auxiliaryVars = 0;
};

CompletionReport completion_report(const Program& program, Heuristic heuristic, std::uint64_t seed);

bool solve_tight_asp(const Program& program, Heuristic heuristic = Heuristic::MinFill, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// normal programs: DP with local level mappings

struct AspNodeStats {
  std::size_t bagSize = 0;
  std::size_t rows = 0;
};

struct AspDpStats {
  std::vector<AspNodeStats> perNode;
  std::size_t maxRows = 0;
};

/// Upper bound on rows at a node with `bagSize` atoms: 2^k * 2^k * k!
/// (saturates at the largest representable value).
std::uint64_t asp_row_bound(std::size_t bagSize);

/// Decides answer-set existence. Only a decision is offered: rows represent
/// local orders, of which several may stand for one answer set.
/// DecompositionMismatch when `ntd` does not decompose the primal graph.
bool solve_normal_asp(const Program& program, const NiceTreeDecomposition& ntd, AspDpStats* stats = nullptr);
bool solve_normal_asp(const Program& program, Heuristic heuristic = Heuristic::MinFill, std::uint64_t seed = 0,
                      AspDpStats* stats = nullptr);

enum class AspMode { Auto, Tight, Normal };

/// Dispatches on tightness in Auto mode.
bool has_answer_set(const Program& program, AspMode mode, Heuristic heuristic = Heuristic::MinFill,
                    std::uint64_t seed = 0);

}  // namespace tw
