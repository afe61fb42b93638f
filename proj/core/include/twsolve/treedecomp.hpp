#pragma once

#include "twsolve/graph.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tw {

/// Parent/children view of a tree rooted at `root`.
struct RootedTree {
  std::size_t root = 0;
  std::vector<std::size_t> parent;  // parent[root] == root
  std::vector<std::vector<std::size_t>> children;
  std::vector<std::size_t> postOrder;  // children before parents
  std::vector<std::size_t> depth;
};

/// Tree decomposition over vertices 0..vertexCount-1. Bags are sorted.
/// Width follows the usual convention: largest bag size minus one.
struct TreeDecomposition {
  std::size_t vertexCount = 0;
  std::vector<std::vector<std::size_t>> bags;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t root = 0;

  std::size_t node_count() const { return bags.size(); }
  std::size_t max_bag_size() const;
  /// max bag size - 1; -1 when every bag is empty
  long width() const { return static_cast<long>(max_bag_size()) - 1; }

  /// Requires the edge set to form a tree over all nodes.
  RootedTree rooted() const;

  bool operator==(const TreeDecomposition&) const = default;
};

// ---------------------------------------------------------------------------
// validation

enum class ViolationKind {
  NotATree,
  BagVertexOutOfRange,
  VertexUncovered,
  EdgeUncovered,
  ConnectednessViolation,
};

struct Violation {
  ViolationKind kind;
  std::size_t vertex = 0;                 // VertexUncovered, ConnectednessViolation, BagVertexOutOfRange
  std::pair<std::size_t, std::size_t> edge{};  // EdgeUncovered
  std::pair<std::size_t, std::size_t> nodes{};  // ConnectednessViolation: two disconnected occurrences

  std::string describe() const;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the three decomposition conditions (plus tree shape) against `graph`.
/// Violations are reported, never thrown.
ValidationReport validate(const TreeDecomposition& td, const PrimalGraph& graph);

// ---------------------------------------------------------------------------
// heuristic decomposition

enum class Heuristic { MinFill, MinDegree };

std::string_view to_string(Heuristic h);
Heuristic heuristic_from_string(std::string_view name);

/// Vertex elimination ordering by the given greedy heuristic. Ties go to the
/// smallest (relabelled) vertex; seed 0 keeps the identity labelling.
std::vector<std::size_t> elimination_ordering(const PrimalGraph& graph, Heuristic heuristic, std::uint64_t seed);

/// Builds a decomposition from the elimination ordering's fill-in cliques.
/// Disconnected graphs get one subtree per component below an empty root.
TreeDecomposition decompose(const PrimalGraph& graph, Heuristic heuristic, std::uint64_t seed = 0);
TreeDecomposition decomposition_from_ordering(const PrimalGraph& graph, const std::vector<std::size_t>& ordering);

/// Drops every vertex with keep[v] == false from all bags (and merges the
/// bags that become redundant). Valid for `graph` minus those vertices.
TreeDecomposition restrict_decomposition(const TreeDecomposition& td, const std::vector<bool>& keep);

// ---------------------------------------------------------------------------
// nice form

enum class NodeKind { Leaf, Introduce, Forget, Join };

std::string_view to_string(NodeKind kind);

struct NiceNode {
  NodeKind kind = NodeKind::Leaf;
  std::size_t vertex = 0;  // Introduce/Forget only
  std::vector<std::size_t> children;
  std::vector<std::size_t> bag;  // sorted
};

/// Nodes are stored children-first; the root is the last node and has an
/// empty bag, as do all leaves.
struct NiceTreeDecomposition {
  std::size_t vertexCount = 0;
  std::vector<NiceNode> nodes;

  std::size_t root() const { return nodes.size() - 1; }
  std::size_t max_bag_size() const;
  long width() const { return static_cast<long>(max_bag_size()) - 1; }
  std::vector<std::size_t> depths() const;
  TreeDecomposition as_tree_decomposition() const;
};

/// Throws InvalidInputDecomposition when `td` is not a valid decomposition of
/// `graph`.
NiceTreeDecomposition make_nice(const TreeDecomposition& td, const PrimalGraph& graph);
/// Same, without the validity check (td must be a tree).
NiceTreeDecomposition make_nice(const TreeDecomposition& td);

/// For each vertex set, the shallowest nice node whose bag contains it (ties:
/// smallest node id), or `kNoNode` when no bag covers the set.
inline constexpr std::size_t kNoNode = static_cast<std::size_t>(-1);
std::vector<std::size_t> attachment_nodes(const NiceTreeDecomposition& ntd,
                                          const std::vector<std::vector<std::size_t>>& vertexSets);

/// Structural problems with the nice-form invariants; empty when nice.
std::vector<std::string> check_nice(const NiceTreeDecomposition& ntd);

// ---------------------------------------------------------------------------
// PACE .td

TreeDecomposition read_pace_td(std::istream& in);
TreeDecomposition read_pace_td(std::string_view text);
void write_pace_td(std::ostream& out, const TreeDecomposition& td);

}  // namespace tw
