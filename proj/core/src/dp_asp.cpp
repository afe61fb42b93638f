#include "twsolve/dp_asp.hpp"

#include "bits.hpp"
#include "twsolve/errors.hpp"
#include "twsolve/graph.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace tw {

namespace {

/// One partial solution: truth values and provenness over the bag (bit i is
/// bag position i) plus the local level order of the true atoms, by vertex id.
struct AspRow {
  std::uint64_t assign = 0;
  std::uint64_t proven = 0;
  std::vector<std::uint32_t> order;

  bool operator==(const AspRow&) const = default;
};

struct AspRowHash {
  std::size_t operator()(const AspRow& r) const noexcept {
    std::uint64_t h = r.assign * 0x9E3779B97F4A7C15ULL ^ (r.proven + 0x632BE59BD9B4E019ULL);
    for (std::uint32_t v : r.order) h = (h ^ v) * 0x100000001B3ULL;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

using AspTable = std::unordered_set<AspRow, AspRowHash>;

/// A rule lowered onto the positions of its attachment node's bag.
struct LocalRule {
  bool constraint = false;
  std::size_t headPos = 0;
  std::uint32_t headVertex = 0;
  std::uint64_t pos = 0, neg = 0;
  std::vector<std::uint32_t> posVertices;
};

LocalRule lower(const Rule& rule, const std::vector<std::size_t>& bag) {
  LocalRule lr;
  lr.constraint = rule.is_constraint();
  if (rule.head) {
    lr.headVertex = static_cast<std::uint32_t>(*rule.head - 1);
    lr.headPos = bits::position(bag, lr.headVertex);
  }
  for (Var a : rule.posBody) {
    lr.pos |= std::uint64_t{1} << bits::position(bag, static_cast<std::size_t>(a) - 1);
    lr.posVertices.push_back(static_cast<std::uint32_t>(a - 1));
  }
  for (Var a : rule.negBody) lr.neg |= std::uint64_t{1} << bits::position(bag, static_cast<std::size_t>(a) - 1);
  return lr;
}

/// Applies the node's rules: false if the row violates one; otherwise sets
/// the proven bit of every head whose rule fires with B+ ordered before it.
bool apply_rules(AspRow& row, const std::vector<LocalRule>& rules) {
  for (const auto& r : rules) {
    const bool body = (row.assign & r.pos) == r.pos && (row.assign & r.neg) == 0;
    if (!body) continue;
    if (r.constraint || !bits::test(row.assign, r.headPos)) return false;
    auto rank = [&](std::uint32_t v) { return std::find(row.order.begin(), row.order.end(), v) - row.order.begin(); };
    const auto headRank = rank(r.headVertex);
    bool ordered = true;
    for (std::uint32_t p : r.posVertices) {
      if (rank(p) >= headRank) {
        ordered = false;
        break;
      }
    }
    if (ordered) row.proven |= std::uint64_t{1} << r.headPos;
  }
  return true;
}

void check_row_shape(const AspRow& row, const std::vector<std::size_t>& bag) {
  if ((row.proven & ~row.assign) != 0) throw std::logic_error("proven atom is not true");
  if (static_cast<std::size_t>(std::popcount(row.assign)) != row.order.size()) {
    throw std::logic_error("order does not rank exactly the true atoms");
  }
  for (std::uint32_t v : row.order) {
    auto p = bits::position(bag, v);
    if (p >= bag.size() || bag[p] != v || !bits::test(row.assign, p)) {
      throw std::logic_error("order ranks an atom outside the bag");
    }
  }
}

}  // namespace

std::uint64_t asp_row_bound(std::size_t k) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (k >= 32) return kMax;
  std::uint64_t bound = std::uint64_t{1} << (2 * k);
  for (std::size_t i = 2; i <= k; ++i) {
    if (bound > kMax / i) return kMax;
    bound *= i;
  }
  return bound;
}

bool solve_normal_asp(const Program& program, const NiceTreeDecomposition& ntd, AspDpStats* stats) {
  const std::size_t n = program.atom_count();
  if (ntd.vertexCount != n) throw Error(ErrorCode::DecompositionMismatch, "decomposition vertex count differs from atom count");
  {
    std::vector<bool> occurs(n, false);
    for (const auto& r : program.rules) {
      for (Var a : r.atoms()) occurs[static_cast<std::size_t>(a) - 1] = true;
    }
    for (const auto& v : validate(ntd.as_tree_decomposition(), primal_graph(program)).violations) {
      if (v.kind == ViolationKind::VertexUncovered && !occurs[v.vertex]) continue;  // atom in no rule: false anyway
      throw Error(ErrorCode::DecompositionMismatch, "decomposition does not fit program: " + v.describe());
    }
    if (!check_nice(ntd).empty()) throw Error(ErrorCode::DecompositionMismatch, "decomposition is not nice");
  }

  std::vector<std::vector<std::size_t>> sets;
  for (const auto& r : program.rules) {
    std::vector<std::size_t> s;
    for (Var a : r.atoms()) s.push_back(static_cast<std::size_t>(a) - 1);
    sets.push_back(std::move(s));
  }
  const auto attach = attachment_nodes(ntd, sets);
  std::vector<std::vector<LocalRule>> rulesAt(ntd.nodes.size());
  for (std::size_t i = 0; i < attach.size(); ++i) {
    rulesAt[attach[i]].push_back(lower(program.rules[i], ntd.nodes[attach[i]].bag));
  }

  if (stats) stats->perNode.assign(ntd.nodes.size(), {});
  std::vector<AspTable> tables(ntd.nodes.size());
  for (const NiceNode& node : ntd.nodes) {
    if (node.bag.size() > bits::kMaxBag) {
      throw Error(ErrorCode::WidthLimitExceeded, "bag of size " + std::to_string(node.bag.size()) + " exceeds DP limit");
    }
  }
  for (std::size_t t = 0; t < ntd.nodes.size(); ++t) {
    const NiceNode& node = ntd.nodes[t];
    const auto& rules = rulesAt[t];
    AspTable& table = tables[t];
    auto emit = [&](AspRow row) {
      if (apply_rules(row, rules)) table.insert(std::move(row));
    };
    switch (node.kind) {
      case NodeKind::Leaf:
        emit(AspRow{});
        break;
      case NodeKind::Introduce: {
        const std::size_t p = bits::position(node.bag, node.vertex);
        for (const AspRow& row : tables[node.children[0]]) {
          AspRow off{bits::insert_bit(row.assign, p, false), bits::insert_bit(row.proven, p, false), row.order};
          emit(std::move(off));
          for (std::size_t k = 0; k <= row.order.size(); ++k) {
            AspRow on{bits::insert_bit(row.assign, p, true), bits::insert_bit(row.proven, p, false), row.order};
            on.order.insert(on.order.begin() + static_cast<std::ptrdiff_t>(k), static_cast<std::uint32_t>(node.vertex));
            emit(std::move(on));
          }
        }
        break;
      }
      case NodeKind::Forget: {
        const std::size_t p = bits::position(ntd.nodes[node.children[0]].bag, node.vertex);
        for (const AspRow& row : tables[node.children[0]]) {
          const bool value = bits::test(row.assign, p);
          if (value && !bits::test(row.proven, p)) continue;
          AspRow out{bits::remove_bit(row.assign, p), bits::remove_bit(row.proven, p), row.order};
          if (value) std::erase(out.order, static_cast<std::uint32_t>(node.vertex));
          emit(std::move(out));
        }
        break;
      }
      case NodeKind::Join: {
        // index the right child by (assignment, order); proven bits are unioned
        std::unordered_map<AspRow, std::vector<std::uint64_t>, AspRowHash> right;
        for (const AspRow& row : tables[node.children[1]]) {
          right[AspRow{row.assign, 0, row.order}].push_back(row.proven);
        }
        for (const AspRow& row : tables[node.children[0]]) {
          auto it = right.find(AspRow{row.assign, 0, row.order});
          if (it == right.end()) continue;
          for (std::uint64_t proven : it->second) emit(AspRow{row.assign, row.proven | proven, row.order});
        }
        break;
      }
    }
    for (std::size_t c : node.children) AspTable().swap(tables[c]);

    for (const AspRow& row : table) check_row_shape(row, node.bag);
    if (table.size() > asp_row_bound(node.bag.size())) throw std::logic_error("table exceeds 2^k * 2^k * k! rows");
    if (stats) {
      stats->perNode[t] = {node.bag.size(), table.size()};
      stats->maxRows = std::max(stats->maxRows, table.size());
    }
    if (table.empty()) return false;
  }
  return !tables[ntd.root()].empty();
}

bool solve_normal_asp(const Program& program, Heuristic heuristic, std::uint64_t seed, AspDpStats* stats) {
  return solve_normal_asp(program, make_nice(decompose(primal_graph(program), heuristic, seed)), stats);
}

}  // namespace tw
