#pragma once

#include "twsolve/model.hpp"
#include "twsolve/treedecomp.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace tw {

using BigInt = mpz_class;

struct DpStats {
  std::size_t nodes = 0;
  std::size_t maxRows = 0;
  std::size_t maxBagSize = 0;
  std::size_t totalRows = 0;
};

/// Extra multiplicative weight applied at one node, keyed by the assignment
/// of `vertices` (all of which must lie in that node's bag). Zero prunes.
struct NodeFactor {
  std::size_t node = 0;
  std::vector<std::size_t> vertices;
  std::function<BigInt(const std::vector<bool>&)> weight;
};

enum class DpMode { Count, Decide };

struct SatDpOptions {
  DpMode mode = DpMode::Count;
  std::vector<NodeFactor> factors;
  DpStats* stats = nullptr;
};

/// Raw table DP. Counts assignments of the vertices occurring in some bag,
/// i.e. it does not account for variables outside the decomposition. Every
/// clause must be covered by a bag (DecompositionMismatch otherwise). In
/// Decide mode the result is 0 or 1.
BigInt run_sat_dp(const CnfFormula& cnf, const NiceTreeDecomposition& ntd, const SatDpOptions& options);

/// Exact model count over all cnf.numVars variables. `ntd` must decompose the
/// primal graph; variables that occur in no clause may be left out of it and
/// are accounted for by a factor of two each.
BigInt count_models(const CnfFormula& cnf, const NiceTreeDecomposition& ntd, DpStats* stats = nullptr);
bool solve_sat(const CnfFormula& cnf, const NiceTreeDecomposition& ntd, DpStats* stats = nullptr);

/// Decompose the primal graph restricted to constrained variables, then run the DP.
NiceTreeDecomposition decompose_formula(const CnfFormula& cnf, Heuristic heuristic, std::uint64_t seed);
BigInt count_models(const CnfFormula& cnf, Heuristic heuristic = Heuristic::MinFill, std::uint64_t seed = 0);
bool solve_sat(const CnfFormula& cnf, Heuristic heuristic = Heuristic::MinFill, std::uint64_t seed = 0);

/// Exhaustive enumeration; TooLargeForOracle above `kBruteForceMaxVars`.
inline constexpr std::size_t kBruteForceMaxVars = 26;
BigInt brute_force_count(const CnfFormula& cnf);

}  // namespace tw
