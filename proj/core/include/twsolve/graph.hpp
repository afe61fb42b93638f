#pragma once

#include "twsolve/model.hpp"

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

namespace tw {

/// Simple undirected graph over vertices 0..n-1. For instance graphs,
/// vertex v corresponds to variable/atom v + 1.
class PrimalGraph {
 public:
  PrimalGraph() = default;
  explicit PrimalGraph(std::size_t vertexCount) : adj_(vertexCount) {}

  std::size_t vertex_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_; }

  /// Adds {u, v}; self-loops and duplicates are ignored. Returns true if new.
  bool add_edge(std::size_t u, std::size_t v);
  void add_clique(const std::vector<std::size_t>& vertices);
  bool has_edge(std::size_t u, std::size_t v) const;

  /// Sorted neighbor list.
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adj_[v]; }
  std::size_t degree(std::size_t v) const { return adj_[v].size(); }

  /// Edges as (u, v) with u < v, lexicographically sorted.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

  bool operator==(const PrimalGraph& other) const { return adj_ == other.adj_; }

 private:
  std::vector<std::vector<std::size_t>> adj_;
  std::size_t edges_ = 0;
};

PrimalGraph primal_graph(const CnfFormula& cnf);
PrimalGraph primal_graph(const Program& program);

/// Connected components, each sorted, ordered by smallest member.
std::vector<std::vector<std::size_t>> connected_components(const PrimalGraph& graph);

/// PACE `.gr`: `p tw <n> <m>` then one 1-indexed `u v` line per edge.
PrimalGraph read_pace_graph(std::istream& in);
PrimalGraph read_pace_graph(std::string_view text);
void write_pace_graph(std::ostream& out, const PrimalGraph& graph);

}  // namespace tw
