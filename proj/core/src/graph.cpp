#include "twsolve/graph.hpp"

#include "twsolve/errors.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace tw {

bool PrimalGraph::add_edge(std::size_t u, std::size_t v) {
  if (u == v) return false;
  auto& nu = adj_[u];
  auto it = std::lower_bound(nu.begin(), nu.end(), v);
  if (it != nu.end() && *it == v) return false;
  nu.insert(it, v);
  auto& nv = adj_[v];
  nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
  ++edges_;
  return true;
}

void PrimalGraph::add_clique(const std::vector<std::size_t>& vertices) {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) add_edge(vertices[i], vertices[j]);
  }
}

bool PrimalGraph::has_edge(std::size_t u, std::size_t v) const {
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

std::vector<std::pair<std::size_t, std::size_t>> PrimalGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(edges_);
  for (std::size_t u = 0; u < adj_.size(); ++u) {
    for (std::size_t v : adj_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

PrimalGraph primal_graph(const CnfFormula& cnf) {
  PrimalGraph g(cnf.numVars);
  std::vector<std::size_t> vs;
  for (const auto& clause : cnf.clauses) {
    vs.clear();
    for (Literal lit : clause) vs.push_back(static_cast<std::size_t>(lit.var()) - 1);
    g.add_clique(vs);
  }
  return g;
}

PrimalGraph primal_graph(const Program& program) {
  PrimalGraph g(program.atom_count());
  std::vector<std::size_t> vs;
  for (const auto& rule : program.rules) {
    vs.clear();
    for (Var a : rule.atoms()) vs.push_back(static_cast<std::size_t>(a) - 1);
    g.add_clique(vs);
  }
  return g;
}

std::vector<std::vector<std::size_t>> connected_components(const PrimalGraph& graph) {
  const std::size_t n = graph.vertex_count();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> comp;
    stack.push_back(s);
    seen[s] = true;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (std::size_t w : graph.neighbors(v)) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

PrimalGraph read_pace_graph(std::istream& in) {
  std::string line;
  std::size_t lineNo = 0;
  bool haveHeader = false;
  std::size_t declaredEdges = 0;
  std::size_t seenEdges = 0;
  PrimalGraph g;
  while (std::getline(in, line)) {
    ++lineNo;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == 'c') continue;
    if (first == "p") {
      std::string kind;
      long long n = -1, m = -1;
      if (haveHeader || !(ls >> kind >> n >> m) || kind != "tw" || n < 0 || m < 0) {
        throw Error(ErrorCode::MalformedHeader, "expected 'p tw <n> <m>'", lineNo);
      }
      g = PrimalGraph(static_cast<std::size_t>(n));
      declaredEdges = static_cast<std::size_t>(m);
      haveHeader = true;
      continue;
    }
    if (!haveHeader) throw Error(ErrorCode::MalformedHeader, "edge before 'p tw' header", lineNo);
    long long u = 0, v = 0;
    std::istringstream es(line);
    std::string rest;
    if (!(es >> u >> v) || (es >> rest)) throw Error(ErrorCode::SyntaxError, "expected edge 'u v'", lineNo);
    const auto n = static_cast<long long>(g.vertex_count());
    if (u < 1 || v < 1 || u > n || v > n) {
      throw Error(ErrorCode::LiteralOutOfRange, "edge endpoint out of range", lineNo);
    }
    g.add_edge(static_cast<std::size_t>(u - 1), static_cast<std::size_t>(v - 1));
    ++seenEdges;
  }
  if (!haveHeader) throw Error(ErrorCode::MalformedHeader, "missing 'p tw' header", lineNo ? lineNo : 1);
  if (seenEdges != declaredEdges) {
    throw Error(ErrorCode::MalformedHeader,
                "header declares " + std::to_string(declaredEdges) + " edges, found " + std::to_string(seenEdges),
                lineNo);
  }
  return g;
}

PrimalGraph read_pace_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_pace_graph(in);
}

void write_pace_graph(std::ostream& out, const PrimalGraph& graph) {
  out << "p tw " << graph.vertex_count() << ' ' << graph.edge_count() << '\n';
  for (auto [u, v] : graph.edges()) out << u + 1 << ' ' << v + 1 << '\n';
}

}  // namespace tw
