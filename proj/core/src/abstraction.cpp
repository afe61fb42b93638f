#include "twsolve/hybrid.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <iterator>

namespace tw {

std::size_t max_degree_removal(const PrimalGraph& graph, const std::vector<bool>& retained) {
  std::size_t best = graph.vertex_count(), bestDegree = 0;
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    if (!retained[v]) continue;
    const auto& nb = graph.neighbors(v);
    const auto d = static_cast<std::size_t>(std::count_if(nb.begin(), nb.end(), [&](std::size_t u) { return retained[u]; }));
    if (best == graph.vertex_count() || d > bestDegree) {
      best = v;
      bestDegree = d;
    }
  }
  return best;
}

namespace {

PrimalGraph induced(const PrimalGraph& graph, const std::vector<bool>& keep) {
  PrimalGraph g(graph.vertex_count());
  for (auto [u, v] : graph.edges()) {
    if (keep[u] && keep[v]) g.add_edge(u, v);
  }
  return g;
}

void insert_sorted(std::vector<std::size_t>& bag, std::size_t v) {
  auto it = std::lower_bound(bag.begin(), bag.end(), v);
  if (it == bag.end() || *it != v) bag.insert(it, v);
}

/// Adds every boundary vertex to `host`, extending each one's occurrence
/// subtree along the tree path from the nearest bag that already holds it.
void inject(TreeDecomposition& td, const std::vector<std::vector<std::size_t>>& adj, std::size_t host,
            const std::vector<std::size_t>& boundary) {
  for (std::size_t v : boundary) {
    if (std::binary_search(td.bags[host].begin(), td.bags[host].end(), v)) continue;
    std::vector<std::size_t> from(td.bags.size(), td.bags.size());
    std::queue<std::size_t> queue;
    queue.push(host);
    from[host] = host;
    std::size_t found = td.bags.size();
    while (!queue.empty() && found == td.bags.size()) {
      const std::size_t t = queue.front();
      queue.pop();
      for (std::size_t u : adj[t]) {
        if (from[u] != td.bags.size()) continue;
        from[u] = t;
        if (std::binary_search(td.bags[u].begin(), td.bags[u].end(), v)) {
          found = u;
          break;
        }
        queue.push(u);
      }
    }
    if (found == td.bags.size()) throw std::logic_error("boundary vertex missing from the decomposition");
    for (std::size_t t = from[found];; t = from[t]) {
      insert_sorted(td.bags[t], v);
      if (t == host) break;
    }
  }
}

}  // namespace

Abstraction build_abstraction(const PrimalGraph& graph, std::size_t widthLimit, Heuristic heuristic,
                              std::uint64_t seed, const RemovalStrategy& strategy) {
  if (widthLimit < 1) throw std::invalid_argument("width threshold must be at least 1");
  const std::size_t n = graph.vertex_count();
  Abstraction a;
  a.retained.assign(n, true);
  TreeDecomposition td;
  std::size_t left = n;
  for (;;) {
    a.abstractGraph = induced(graph, a.retained);
    td = decompose(a.abstractGraph, heuristic, seed);
    a.retainedWidth = td.width();
    if (a.retainedWidth <= static_cast<long>(widthLimit) || left == 0) break;
    const std::size_t v = strategy(graph, a.retained);
    if (v >= n || !a.retained[v]) throw std::logic_error("removal strategy picked an invalid vertex");
    a.retained[v] = false;
    --left;
  }
  td = restrict_decomposition(td, a.retained);

  std::vector<bool> removed(n);
  for (std::size_t v = 0; v < n; ++v) removed[v] = !a.retained[v];
  for (auto& members : connected_components(induced(graph, removed))) {
    if (a.retained[members.front()]) continue;
    RemovedComponent c;
    c.vertices = std::move(members);
    for (std::size_t v : c.vertices) {
      for (std::size_t u : graph.neighbors(v)) {
        if (a.retained[u]) c.boundary.push_back(u);
      }
    }
    std::sort(c.boundary.begin(), c.boundary.end());
    c.boundary.erase(std::unique(c.boundary.begin(), c.boundary.end()), c.boundary.end());
    a.components.push_back(std::move(c));
  }

  std::vector<std::vector<std::size_t>> adj(td.bags.size());
  for (auto [u, v] : td.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  const RootedTree tree = td.rooted();
  for (const auto& c : a.components) {
    if (c.boundary.empty()) continue;
    // most boundary vertices already present, then shallowest, then smallest id
    std::size_t host = 0;
    std::size_t bestShare = 0;
    for (std::size_t t = 0; t < td.bags.size(); ++t) {
      std::vector<std::size_t> common;
      std::set_intersection(td.bags[t].begin(), td.bags[t].end(), c.boundary.begin(), c.boundary.end(),
                            std::back_inserter(common));
      const std::size_t share = common.size();
      if (t == 0 || share > bestShare || (share == bestShare && tree.depth[t] < tree.depth[host])) {
        host = t;
        bestShare = share;
      }
    }
    inject(td, adj, host, c.boundary);
  }

  a.ntd = make_nice(td);
  std::vector<std::vector<std::size_t>> sets;
  for (const auto& c : a.components) sets.push_back(c.boundary);
  const auto hosts = attachment_nodes(a.ntd, sets);
  for (std::size_t i = 0; i < hosts.size(); ++i) {
    if (hosts[i] == kNoNode) throw std::logic_error("boundary not contained in any bag after injection");
    a.components[i].host = hosts[i];
  }
  return a;
}

}  // namespace tw
