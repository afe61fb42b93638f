#include "twsolve/treedecomp.hpp"

#include "twsolve/errors.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

namespace tw {

std::size_t TreeDecomposition::max_bag_size() const {
  std::size_t best = 0;
  for (const auto& b : bags) best = std::max(best, b.size());
  return best;
}

RootedTree TreeDecomposition::rooted() const {
  const std::size_t n = node_count();
  RootedTree rt;
  rt.root = root;
  rt.parent.assign(n, n);
  rt.children.assign(n, {});
  rt.depth.assign(n, 0);
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  if (n == 0) return rt;
  // preorder via explicit stack, then reverse for post-order
  std::vector<std::size_t> pre;
  std::vector<std::size_t> stack{root};
  rt.parent[root] = root;
  while (!stack.empty()) {
    std::size_t t = stack.back();
    stack.pop_back();
    pre.push_back(t);
    for (auto it = adj[t].rbegin(); it != adj[t].rend(); ++it) {
      std::size_t c = *it;
      if (c == rt.parent[t] && t != root) continue;
      if (rt.parent[c] != n) continue;  // not a tree; ignore revisits
      rt.parent[c] = t;
      rt.depth[c] = rt.depth[t] + 1;
      rt.children[t].push_back(c);
      stack.push_back(c);
    }
  }
  for (auto& ch : rt.children) std::sort(ch.begin(), ch.end());
  rt.postOrder.assign(pre.rbegin(), pre.rend());
  return rt;
}

// ---------------------------------------------------------------------------
// validation

std::string Violation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case ViolationKind::NotATree:
      os << "NotATree";
      break;
    case ViolationKind::BagVertexOutOfRange:
      os << "BagVertexOutOfRange(" << vertex + 1 << ") in bag " << nodes.first + 1;
      break;
    case ViolationKind::VertexUncovered:
      os << "VertexUncovered(" << vertex + 1 << ")";
      break;
    case ViolationKind::EdgeUncovered:
      os << "EdgeUncovered(" << edge.first + 1 << "," << edge.second + 1 << ")";
      break;
    case ViolationKind::ConnectednessViolation:
      os << "ConnectednessViolation(" << vertex + 1 << ") bags " << nodes.first + 1 << " and " << nodes.second + 1;
      break;
  }
  return os.str();
}

namespace {

bool is_tree(const TreeDecomposition& td) {
  const std::size_t n = td.node_count();
  if (n == 0 || td.edges.size() + 1 != n || td.root >= n) return false;
  std::vector<std::size_t> rep(n);
  std::iota(rep.begin(), rep.end(), 0);
  auto find = [&](std::size_t x) {
    while (rep[x] != x) x = rep[x] = rep[rep[x]];
    return x;
  };
  for (auto [a, b] : td.edges) {
    if (a >= n || b >= n) return false;
    auto ra = find(a), rb = find(b);
    if (ra == rb) return false;
    rep[ra] = rb;
  }
  return true;
}

}  // namespace

ValidationReport validate(const TreeDecomposition& td, const PrimalGraph& graph) {
  ValidationReport report;
  if (!is_tree(td)) {
    report.violations.push_back({ViolationKind::NotATree});
    return report;
  }
  const std::size_t nv = graph.vertex_count();
  std::vector<std::vector<std::size_t>> occurrences(nv);
  for (std::size_t t = 0; t < td.node_count(); ++t) {
    for (std::size_t v : td.bags[t]) {
      if (v >= nv) {
        Violation viol{ViolationKind::BagVertexOutOfRange};
        viol.vertex = v;
        viol.nodes = {t, t};
        report.violations.push_back(viol);
        continue;
      }
      occurrences[v].push_back(t);
    }
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (occurrences[v].empty()) {
      Violation viol{ViolationKind::VertexUncovered};
      viol.vertex = v;
      report.violations.push_back(viol);
    }
  }
  for (auto [u, v] : graph.edges()) {
    const auto& ou = occurrences[u];
    const auto& ov = occurrences[v];
    std::vector<std::size_t> common;
    std::set_intersection(ou.begin(), ou.end(), ov.begin(), ov.end(), std::back_inserter(common));
    if (common.empty()) {
      Violation viol{ViolationKind::EdgeUncovered};
      viol.edge = {u, v};
      report.violations.push_back(viol);
    }
  }
  std::vector<std::vector<std::size_t>> adj(td.node_count());
  for (auto [a, b] : td.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> holds(td.node_count(), 0), seen(td.node_count(), 0);
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& occ = occurrences[v];
    if (occ.size() < 2) continue;
    for (std::size_t t : occ) holds[t] = 1;
    std::vector<std::size_t> stack{occ.front()};
    seen[occ.front()] = 1;
    std::size_t reached = 0;
    std::vector<std::size_t> touched{occ.front()};
    while (!stack.empty()) {
      std::size_t t = stack.back();
      stack.pop_back();
      ++reached;
      for (std::size_t s : adj[t]) {
        if (holds[s] && !seen[s]) {
          seen[s] = 1;
          touched.push_back(s);
          stack.push_back(s);
        }
      }
    }
    if (reached != occ.size()) {
      Violation viol{ViolationKind::ConnectednessViolation};
      viol.vertex = v;
      std::size_t other = *std::find_if(occ.begin(), occ.end(), [&](std::size_t t) { return !seen[t]; });
      viol.nodes = {occ.front(), other};
      report.violations.push_back(viol);
    }
    for (std::size_t t : occ) holds[t] = 0;
    for (std::size_t t : touched) seen[t] = 0;
  }
  return report;
}

// ---------------------------------------------------------------------------
// heuristics

std::string_view to_string(Heuristic h) { return h == Heuristic::MinFill ? "min-fill" : "min-degree"; }

Heuristic heuristic_from_string(std::string_view name) {
  if (name == "min-fill") return Heuristic::MinFill;
  if (name == "min-degree") return Heuristic::MinDegree;
  throw std::invalid_argument("unknown heuristic '" + std::string(name) + "'");
}

namespace {

using AdjSets = std::vector<std::vector<std::size_t>>;

bool contains(const std::vector<std::size_t>& sorted, std::size_t x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

void insert_sorted(std::vector<std::size_t>& sorted, std::size_t x) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  if (it == sorted.end() || *it != x) sorted.insert(it, x);
}

void erase_sorted(std::vector<std::size_t>& sorted, std::size_t x) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  if (it != sorted.end() && *it == x) sorted.erase(it);
}

std::size_t fill_in(const AdjSets& adj, std::size_t v) {
  const auto& nb = adj[v];
  std::size_t missing = 0;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    for (std::size_t j = i + 1; j < nb.size(); ++j) {
      if (!contains(adj[nb[i]], nb[j])) ++missing;
    }
  }
  return missing;
}

/// Removes v, turning its neighborhood into a clique. Returns the neighborhood.
std::vector<std::size_t> eliminate(AdjSets& adj, std::size_t v) {
  std::vector<std::size_t> nb = std::move(adj[v]);
  adj[v].clear();
  for (std::size_t u : nb) erase_sorted(adj[u], v);
  for (std::size_t i = 0; i < nb.size(); ++i) {
    for (std::size_t j = i + 1; j < nb.size(); ++j) {
      insert_sorted(adj[nb[i]], nb[j]);
      insert_sorted(adj[nb[j]], nb[i]);
    }
  }
  return nb;
}

AdjSets adjacency_of(const PrimalGraph& graph) {
  AdjSets adj(graph.vertex_count());
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) adj[v] = graph.neighbors(v);
  return adj;
}

/// Contracts tree edges whose bags are nested. Keeps relative node order.
TreeDecomposition compress(const TreeDecomposition& td) {
  const std::size_t n = td.node_count();
  if (n <= 1) return td;
  RootedTree rt = td.rooted();
  std::vector<std::vector<std::size_t>> bags = td.bags;
  std::vector<std::size_t> rep(n);
  std::iota(rep.begin(), rep.end(), 0);
  auto find = [&](std::size_t x) {
    while (rep[x] != x) x = rep[x] = rep[rep[x]];
    return x;
  };
  for (std::size_t t : rt.postOrder) {
    if (t == rt.root) continue;
    std::size_t p = find(rt.parent[t]);
    const auto& bt = bags[t];
    auto& bp = bags[p];
    if (std::includes(bp.begin(), bp.end(), bt.begin(), bt.end())) {
      rep[t] = p;
    } else if (std::includes(bt.begin(), bt.end(), bp.begin(), bp.end())) {
      bp = bt;
      rep[t] = p;
    }
  }
  TreeDecomposition out;
  out.vertexCount = td.vertexCount;
  std::vector<std::size_t> newId(n, n);
  for (std::size_t t = 0; t < n; ++t) {
    if (find(t) == t) {
      newId[t] = out.bags.size();
      out.bags.push_back(bags[t]);
    }
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (find(t) != t || t == rt.root) continue;
    std::size_t p = find(rt.parent[t]);
    out.edges.emplace_back(newId[t], newId[p]);
  }
  out.root = newId[find(rt.root)];
  return out;
}

}  // namespace

std::vector<std::size_t> elimination_ordering(const PrimalGraph& graph, Heuristic heuristic, std::uint64_t seed) {
  const std::size_t n = graph.vertex_count();
  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), 0);
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::shuffle(label.begin(), label.end(), rng);
  }
  AdjSets adj = adjacency_of(graph);
  auto score = [&](std::size_t v) { return heuristic == Heuristic::MinFill ? fill_in(adj, v) : adj[v].size(); };

  // (score, label, vertex)
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> queue;
  std::vector<std::size_t> current(n);
  for (std::size_t v = 0; v < n; ++v) {
    current[v] = score(v);
    queue.emplace(current[v], label[v], v);
  }
  std::vector<char> done(n, 0);
  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<std::size_t> affected;
  while (!queue.empty()) {
    auto [s, l, v] = *queue.begin();
    queue.erase(queue.begin());
    done[v] = 1;
    order.push_back(v);
    auto nb = eliminate(adj, v);
    affected = nb;
    if (heuristic == Heuristic::MinFill) {
      for (std::size_t u : nb) affected.insert(affected.end(), adj[u].begin(), adj[u].end());
      std::sort(affected.begin(), affected.end());
      affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
    }
    for (std::size_t u : affected) {
      if (done[u]) continue;
      std::size_t fresh = score(u);
      if (fresh == current[u]) continue;
      queue.erase({current[u], label[u], u});
      current[u] = fresh;
      queue.emplace(fresh, label[u], u);
    }
  }
  return order;
}

TreeDecomposition decomposition_from_ordering(const PrimalGraph& graph, const std::vector<std::size_t>& ordering) {
  const std::size_t n = graph.vertex_count();
  TreeDecomposition td;
  td.vertexCount = n;
  if (n == 0) {
    td.bags.emplace_back();
    return td;
  }
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[ordering[i]] = i;
  AdjSets adj = adjacency_of(graph);
  td.bags.resize(n);
  std::vector<std::size_t> parent(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t v = ordering[i];
    auto nb = eliminate(adj, v);
    auto& bag = td.bags[i];
    bag = nb;
    bag.push_back(v);
    std::sort(bag.begin(), bag.end());
    std::size_t best = n;
    for (std::size_t u : nb) best = std::min(best, pos[u]);
    parent[i] = best;
  }
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (parent[i] == n) {
      roots.push_back(i);
    } else {
      td.edges.emplace_back(i, parent[i]);
    }
  }
  // each component is compressed on its own, then joined below a fresh empty bag
  std::vector<std::vector<std::size_t>> kids(n);
  for (auto [c, p] : td.edges) kids[p].push_back(c);
  std::vector<std::size_t> memberRoots;
  std::vector<std::size_t> local(n, n);
  TreeDecomposition joined;
  joined.vertexCount = n;
  for (std::size_t r : roots) {
    TreeDecomposition part;
    part.vertexCount = n;
    std::vector<std::size_t> nodes;
    std::vector<std::size_t> stack{r};
    while (!stack.empty()) {
      std::size_t t = stack.back();
      stack.pop_back();
      nodes.push_back(t);
      for (std::size_t c : kids[t]) stack.push_back(c);
    }
    std::sort(nodes.begin(), nodes.end());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      local[nodes[i]] = i;
      part.bags.push_back(td.bags[nodes[i]]);
    }
    for (std::size_t t : nodes) {
      if (t != r) part.edges.emplace_back(local[t], local[parent[t]]);
    }
    part.root = local[r];
    part = compress(part);
    std::size_t offset = joined.bags.size();
    for (auto& b : part.bags) joined.bags.push_back(std::move(b));
    for (auto [a, b] : part.edges) joined.edges.emplace_back(a + offset, b + offset);
    memberRoots.push_back(part.root + offset);
  }
  if (memberRoots.size() == 1) {
    joined.root = memberRoots.front();
  } else {
    joined.root = joined.bags.size();
    joined.bags.emplace_back();
    for (std::size_t r : memberRoots) joined.edges.emplace_back(r, joined.root);
  }
  return joined;
}

TreeDecomposition decompose(const PrimalGraph& graph, Heuristic heuristic, std::uint64_t seed) {
  return decomposition_from_ordering(graph, elimination_ordering(graph, heuristic, seed));
}

TreeDecomposition restrict_decomposition(const TreeDecomposition& td, const std::vector<bool>& keep) {
  TreeDecomposition out = td;
  for (auto& bag : out.bags) {
    std::erase_if(bag, [&](std::size_t v) { return v >= keep.size() || !keep[v]; });
  }
  return compress(out);
}

}  // namespace tw
