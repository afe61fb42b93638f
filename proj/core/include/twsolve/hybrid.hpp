#pragma once

#include "twsolve/dp_sat.hpp"
#include "twsolve/graph.hpp"
#include "twsolve/model.hpp"
#include "twsolve/treedecomp.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tw {

// ---------------------------------------------------------------------------
// abstraction

struct RemovedComponent {
  std::vector<std::size_t> vertices;  // removed, sorted
  std::vector<std::size_t> boundary;  // retained neighbours, sorted
  std::size_t host = 0;               // nice node whose bag holds the boundary
};

struct Abstraction {
  PrimalGraph abstractGraph;   // retained vertices only (removed ones are isolated and in no bag)
  std::vector<bool> retained;  // per vertex
  std::vector<RemovedComponent> components;
  NiceTreeDecomposition ntd;   // decomposes abstractGraph with every boundary injected into its host
  long retainedWidth = -1;     // heuristic width of abstractGraph before injection
};

/// Picks the next vertex to remove among the retained ones.
using RemovalStrategy = std::function<std::size_t(const PrimalGraph& graph, const std::vector<bool>& retained)>;

/// Highest degree within the retained subgraph; ties go to the smallest id.
std::size_t max_degree_removal(const PrimalGraph& graph, const std::vector<bool>& retained);

/// Removes vertices until the retained subgraph decomposes with width <= W
/// (or nothing is left), groups removed vertices into connected components and
/// injects each boundary into the bag already sharing most of it (ties:
/// shallowest, then smallest node id), repairing connectedness along the way.
Abstraction build_abstraction(const PrimalGraph& graph, std::size_t widthLimit, Heuristic heuristic,
                              std::uint64_t seed, const RemovalStrategy& strategy = max_degree_removal);

// ---------------------------------------------------------------------------
// solver

enum class SubSolverKind { Internal, External };

inline constexpr std::size_t kInternalMaxVars = 22;

struct SolverConfig {
  std::size_t widthThreshold = 10;  // W
  std::size_t maxNestingDepth = 1;  // D
  SubSolverKind subSolver = SubSolverKind::Internal;
  std::string command;              // external: template containing {file}
  std::uint64_t seed = 0;
  Heuristic heuristic = Heuristic::MinFill;
  std::uint64_t boundaryBudget = 4096;  // precompute all boundary assignments up to this many
  std::size_t jobs = 1;
  std::string tmpdir;               // empty: TWSOLVE_TMPDIR, TMPDIR, then /tmp
};

struct HybridStats {
  std::vector<long> widths;  // every heuristic width computed, in order
  std::size_t maxDepth = 0;
  std::size_t recursions = 0;
  std::size_t components = 0;
  std::size_t subSolverCalls = 0;
  std::size_t residualsSolved = 0;
  double seconds = 0;
};

/// Exact model count; the hybrid machinery never approximates.
BigInt hybrid_count(const CnfFormula& cnf, const SolverConfig& config, HybridStats* stats = nullptr);
/// Satisfiability, stopping as soon as some table runs empty.
bool hybrid_decide(const CnfFormula& cnf, const SolverConfig& config, HybridStats* stats = nullptr);

/// Conditions `cnf` on the given literals, runs unit propagation and drops
/// variables that no longer occur. count(cnf | fixed) = count(formula) * 2^freeVars.
struct Residual {
  CnfFormula formula;
  std::size_t freeVars = 0;
  bool conflict = false;
};
Residual condition(const CnfFormula& cnf, const std::vector<Literal>& fixed);

// ---------------------------------------------------------------------------
// sub-solvers

enum class SubSolverMode { Decide, Count };

/// Exhaustive search with unit propagation; DepthExhaustedWithoutSubSolver
/// above kInternalMaxVars variables.
BigInt internal_sub_solve(const CnfFormula& cnf, SubSolverMode mode);

/// Runs `commandTemplate` with {file} replaced by a temporary DIMACS file.
/// Accepts "c s exact arb int N" and "s SATISFIABLE"/"s UNSATISFIABLE"
/// (the latter only in decide mode). SubSolverFailure on bad exit or output.
BigInt external_sub_solve(const CnfFormula& cnf, SubSolverMode mode, const std::string& commandTemplate,
                          const std::string& tmpdir = {});

}  // namespace tw
