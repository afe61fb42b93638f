#include "twsolve/dp_sat.hpp"

#include "bits.hpp"
#include "twsolve/errors.hpp"
#include "twsolve/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace tw {

namespace {

using Table = std::unordered_map<std::uint64_t, BigInt>;

struct ClauseMask {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
};

std::vector<std::size_t> clause_vertices(const Clause& clause) {
  std::vector<std::size_t> vs;
  for (Literal lit : clause) vs.push_back(static_cast<std::size_t>(lit.var()) - 1);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

ClauseMask mask_for(const Clause& clause, const std::vector<std::size_t>& bag) {
  ClauseMask m;
  for (Literal lit : clause) {
    auto bit = std::uint64_t{1} << bits::position(bag, static_cast<std::size_t>(lit.var()) - 1);
    (lit.negative() ? m.neg : m.pos) |= bit;
  }
  return m;
}

}  // namespace

BigInt run_sat_dp(const CnfFormula& cnf, const NiceTreeDecomposition& ntd, const SatDpOptions& options) {
  const std::size_t n = ntd.nodes.size();
  std::vector<std::vector<std::size_t>> sets;
  sets.reserve(cnf.clauses.size());
  for (const auto& clause : cnf.clauses) sets.push_back(clause_vertices(clause));
  const auto attach = attachment_nodes(ntd, sets);
  std::vector<std::vector<std::size_t>> clausesAt(n);
  for (std::size_t i = 0; i < attach.size(); ++i) {
    if (attach[i] == kNoNode) {
      throw Error(ErrorCode::DecompositionMismatch, "clause " + std::to_string(i + 1) + " is not covered by any bag");
    }
    clausesAt[attach[i]].push_back(i);
  }
  std::vector<std::vector<const NodeFactor*>> factorsAt(n);
  for (const auto& f : options.factors) factorsAt.at(f.node).push_back(&f);

  const bool decide = options.mode == DpMode::Decide;
  std::vector<Table> tables(n);
  std::vector<bool> assignment;
  for (const NiceNode& node : ntd.nodes) {
    if (node.bag.size() > bits::kMaxBag) {
      throw Error(ErrorCode::WidthLimitExceeded, "bag of size " + std::to_string(node.bag.size()) + " exceeds DP limit");
    }
  }
  for (std::size_t t = 0; t < n; ++t) {
    const NiceNode& node = ntd.nodes[t];
    Table& table = tables[t];
    switch (node.kind) {
      case NodeKind::Leaf:
        table.emplace(0, 1);
        break;
      case NodeKind::Introduce: {
        Table& child = tables[node.children[0]];
        const std::size_t p = bits::position(node.bag, node.vertex);
        table.reserve(child.size() * 2);
        for (auto& [mask, count] : child) {
          table.emplace(bits::insert_bit(mask, p, false), count);
          table.emplace(bits::insert_bit(mask, p, true), std::move(count));
        }
        break;
      }
      case NodeKind::Forget: {
        Table& child = tables[node.children[0]];
        const std::size_t p = bits::position(ntd.nodes[node.children[0]].bag, node.vertex);
        for (auto& [mask, count] : child) {
          auto [it, fresh] = table.try_emplace(bits::remove_bit(mask, p), count);
          if (!fresh) it->second += count;
        }
        break;
      }
      case NodeKind::Join: {
        Table* a = &tables[node.children[0]];
        Table* b = &tables[node.children[1]];
        if (a->size() > b->size()) std::swap(a, b);
        for (auto& [mask, count] : *a) {
          auto it = b->find(mask);
          if (it != b->end()) table.emplace(mask, count * it->second);
        }
        break;
      }
    }
    for (std::size_t c : node.children) Table().swap(tables[c]);

    for (std::size_t ci : clausesAt[t]) {
      const ClauseMask m = mask_for(cnf.clauses[ci], node.bag);
      std::erase_if(table, [&](const auto& row) { return !((row.first & m.pos) || (~row.first & m.neg)); });
    }
    for (const NodeFactor* f : factorsAt[t]) {
      std::vector<std::size_t> positions;
      for (std::size_t v : f->vertices) positions.push_back(bits::position(node.bag, v));
      assignment.assign(positions.size(), false);
      for (auto it = table.begin(); it != table.end();) {
        for (std::size_t i = 0; i < positions.size(); ++i) assignment[i] = bits::test(it->first, positions[i]);
        BigInt w = f->weight(assignment);
        if (w == 0) {
          it = table.erase(it);
        } else {
          it->second *= w;
          ++it;
        }
      }
    }
    if (decide) {
      for (auto& row : table) row.second = 1;
    }
    if (node.bag.size() < 64 && table.size() > (std::uint64_t{1} << node.bag.size())) {
      throw std::logic_error("table exceeds 2^|bag| rows");
    }
    if (options.stats) {
      auto& s = *options.stats;
      ++s.nodes;
      s.maxRows = std::max(s.maxRows, table.size());
      s.maxBagSize = std::max(s.maxBagSize, node.bag.size());
      s.totalRows += table.size();
    }
    if (table.empty()) return 0;
  }
  const Table& root = tables[ntd.root()];
  auto it = root.find(0);
  return it == root.end() ? BigInt(0) : it->second;
}

namespace {

/// Validates ntd against cnf and returns the number of variables outside every bag.
std::size_t check_formula_decomposition(const CnfFormula& cnf, const NiceTreeDecomposition& ntd) {
  if (ntd.vertexCount != cnf.numVars) {
    throw Error(ErrorCode::DecompositionMismatch, "decomposition has " + std::to_string(ntd.vertexCount) +
                                                      " vertices, formula has " + std::to_string(cnf.numVars) +
                                                      " variables");
  }
  const auto constrained = constrained_vars(cnf);
  const auto report = validate(ntd.as_tree_decomposition(), primal_graph(cnf));
  std::size_t freeVars = 0;
  for (const auto& v : report.violations) {
    if (v.kind == ViolationKind::VertexUncovered && !constrained[v.vertex + 1]) {
      ++freeVars;
      continue;
    }
    throw Error(ErrorCode::DecompositionMismatch, "decomposition does not fit formula: " + v.describe());
  }
  if (!check_nice(ntd).empty()) throw Error(ErrorCode::DecompositionMismatch, "decomposition is not nice");
  return freeVars;
}

}  // namespace

BigInt count_models(const CnfFormula& cnf, const NiceTreeDecomposition& ntd, DpStats* stats) {
  const std::size_t freeVars = check_formula_decomposition(cnf, ntd);
  SatDpOptions options;
  options.stats = stats;
  BigInt count = run_sat_dp(cnf, ntd, options);
  if (count != 0) mpz_mul_2exp(count.get_mpz_t(), count.get_mpz_t(), freeVars);
  return count;
}

bool solve_sat(const CnfFormula& cnf, const NiceTreeDecomposition& ntd, DpStats* stats) {
  check_formula_decomposition(cnf, ntd);
  SatDpOptions options;
  options.mode = DpMode::Decide;
  options.stats = stats;
  return run_sat_dp(cnf, ntd, options) != 0;
}

NiceTreeDecomposition decompose_formula(const CnfFormula& cnf, Heuristic heuristic, std::uint64_t seed) {
  const auto graph = primal_graph(cnf);
  const auto constrained = constrained_vars(cnf);
  std::vector<bool> keep(cnf.numVars);
  for (std::size_t v = 0; v < cnf.numVars; ++v) keep[v] = constrained[v + 1];
  return make_nice(restrict_decomposition(decompose(graph, heuristic, seed), keep));
}

BigInt count_models(const CnfFormula& cnf, Heuristic heuristic, std::uint64_t seed) {
  return count_models(cnf, decompose_formula(cnf, heuristic, seed));
}

bool solve_sat(const CnfFormula& cnf, Heuristic heuristic, std::uint64_t seed) {
  return solve_sat(cnf, decompose_formula(cnf, heuristic, seed));
}

BigInt brute_force_count(const CnfFormula& cnf) {
  if (cnf.numVars > kBruteForceMaxVars) {
    throw Error(ErrorCode::TooLargeForOracle, "brute force limited to " + std::to_string(kBruteForceMaxVars) +
                                                  " variables, formula has " + std::to_string(cnf.numVars));
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> masks;
  for (const auto& clause : cnf.clauses) {
    std::uint32_t pos = 0, neg = 0;
    for (Literal lit : clause) (lit.negative() ? neg : pos) |= std::uint32_t{1} << (lit.var() - 1);
    masks.emplace_back(pos, neg);
  }
  const std::uint64_t total = std::uint64_t{1} << cnf.numVars;
  std::uint64_t count = 0;
  for (std::uint64_t a = 0; a < total; ++a) {
    const auto x = static_cast<std::uint32_t>(a);
    bool ok = true;
    for (auto [pos, neg] : masks) {
      if (!((x & pos) || (~x & neg))) {
        ok = false;
        break;
      }
    }
    count += ok;
  }
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(count), 0, 0, &count);
  return out;
}

}  // namespace tw
