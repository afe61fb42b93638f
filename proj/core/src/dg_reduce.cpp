#include "twsolve/dg_reduce.hpp"

#include "twsolve/errors.hpp"
#include "twsolve/graph.hpp"

#include <algorithm>
#include <bit>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace tw {

std::size_t counter_bits(std::size_t bagSize) { return static_cast<std::size_t>(std::bit_width(bagSize)); }

namespace {

bool node_bound_holds(std::size_t in, std::size_t out) {
  const double factor = static_cast<double>(counter_bits(in) + 1);
  return static_cast<double>(out) <= kDgWidthConstant * static_cast<double>(in) * factor;
}

WidthCertificate certify(const std::vector<NodeWidthRow>& rows, bool counters) {
  WidthCertificate cert;
  cert.constant = kDgWidthConstant;
  cert.counters = counters;
  cert.boundHolds = true;
  std::size_t maxIn = 0, maxOut = 0;
  for (const auto& r : rows) {
    maxIn = std::max(maxIn, r.inputBagSize);
    maxOut = std::max(maxOut, r.outputBagSize);
    cert.boundHolds = cert.boundHolds && node_bound_holds(r.inputBagSize, r.outputBagSize);
  }
  cert.inputWidth = static_cast<long>(maxIn) - 1;
  cert.outputWidth = static_cast<long>(maxOut) - 1;
  cert.bitsPerAtom = counters ? counter_bits(maxIn) : 0;
  std::ostringstream os;
  os << "|out bag| <= " << kDgWidthConstant << " * |in bag| * (ceil(log2(|in bag| + 1)) + 1)";
  cert.bound = os.str();
  return cert;
}

}  // namespace

DgReductionOutput run_dg_reduction(const NiceTreeDecomposition& ntd, NodeEncoder& encoder) {
  const std::size_t n = ntd.nodes.size();
  VarPool pool(encoder.reserved_vars());
  std::vector<NodeEncoderOutput> outputs(n);
  DgReductionOutput result;

  auto inside = [](const std::vector<Var>& bag, const Clause& clause) {
    return std::all_of(clause.begin(), clause.end(),
                       [&](Literal l) { return std::binary_search(bag.begin(), bag.end(), l.var()); });
  };

  for (std::size_t t = 0; t < n; ++t) {
    std::vector<const NodeEncoderOutput*> children;
    for (std::size_t c : ntd.nodes[t].children) children.push_back(&outputs[c]);
    NodeEncodingContext ctx{ntd, t, children, pool};
    NodeEncoderOutput out = encoder.encode(ctx);
    std::sort(out.outputBag.begin(), out.outputBag.end());
    out.outputBag.erase(std::unique(out.outputBag.begin(), out.outputBag.end()), out.outputBag.end());
    for (const Clause& clause : out.localClauses) {
      if (!inside(out.outputBag, clause)) {
        throw std::logic_error("encoder " + std::string(encoder.name()) + " emitted a clause outside the bag of node " +
                               std::to_string(t));
      }
    }
    for (const auto& [ci, clause] : out.childClauses) {
      if (ci >= children.size() || !inside(children[ci]->outputBag, clause)) {
        throw std::logic_error("encoder " + std::string(encoder.name()) +
                               " emitted a clause outside the child bag at node " + std::to_string(t));
      }
      result.formula.clauses.push_back(clause);
    }
    for (const Clause& clause : out.localClauses) result.formula.clauses.push_back(clause);
    out.childClauses.clear();
    out.localClauses.clear();
    result.perNode.push_back({t, ntd.nodes[t].bag.size(), out.outputBag.size(), out.bits});
    outputs[t] = std::move(out);
  }

  result.formula.numVars = pool.size();
  TreeDecomposition& td = result.outputTd;
  td.vertexCount = pool.size();
  td.root = ntd.root();
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<std::size_t> bag;
    for (Var v : outputs[t].outputBag) bag.push_back(static_cast<std::size_t>(v) - 1);
    td.bags.push_back(std::move(bag));
    for (std::size_t c : ntd.nodes[t].children) td.edges.emplace_back(c, t);
  }
  return result;
}

namespace {

using Bits = std::vector<Var>;

std::uint64_t field(std::uint64_t m, std::size_t offset, std::size_t len) {
  return (m >> offset) & ((std::uint64_t{1} << len) - 1);
}

/// The clause excluding assignment `m` of `inputs` (bit i of m is inputs[i]).
Clause blocking(const Bits& inputs, std::uint64_t m) {
  Clause c;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    c.push_back((m >> i) & 1U ? Literal::neg(inputs[i]) : Literal::pos(inputs[i]));
  }
  return c;
}

/// target <-> fn(inputs), one clause per input assignment.
template <class F>
void define(std::vector<Clause>& out, Var target, const Bits& inputs, F fn) {
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << inputs.size()); ++m) {
    Clause c = blocking(inputs, m);
    c.push_back(fn(m) ? Literal::pos(target) : Literal::neg(target));
    out.push_back(std::move(c));
  }
}

/// Excludes every assignment of `inputs` satisfying pred, unless `guard` holds.
template <class F>
void forbid(std::vector<Clause>& out, const Bits& inputs, F pred, std::optional<Literal> guard = std::nullopt) {
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << inputs.size()); ++m) {
    if (!pred(m)) continue;
    Clause c = blocking(inputs, m);
    if (guard) c.push_back(*guard);
    out.push_back(std::move(c));
  }
}

Bits concat(Bits a, const Bits& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// Spreads rules over covering nodes: fewest rules so far, then shallowest,
/// then smallest id.
std::vector<std::size_t> balanced_attachment(const NiceTreeDecomposition& ntd,
                                             const std::vector<std::vector<std::size_t>>& sets) {
  std::vector<std::vector<std::size_t>> occ(ntd.vertexCount);
  for (std::size_t t = 0; t < ntd.nodes.size(); ++t) {
    for (std::size_t v : ntd.nodes[t].bag) occ[v].push_back(t);
  }
  const auto depth = ntd.depths();
  std::vector<std::size_t> load(ntd.nodes.size(), 0);
  std::vector<std::size_t> result;
  for (const auto& s : sets) {
    if (s.empty()) {
      result.push_back(ntd.root());
      ++load[ntd.root()];
      continue;
    }
    std::vector<std::size_t> cand = occ.at(s[0]);
    for (std::size_t i = 1; i < s.size() && !cand.empty(); ++i) {
      std::vector<std::size_t> next;
      std::set_intersection(cand.begin(), cand.end(), occ.at(s[i]).begin(), occ.at(s[i]).end(),
                            std::back_inserter(next));
      cand = std::move(next);
    }
    if (cand.empty()) throw Error(ErrorCode::InvalidInputDecomposition, "rule not covered by any bag");
    const std::size_t best = *std::min_element(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
      return std::tie(load[a], depth[a], a) < std::tie(load[b], depth[b], b);
    });
    ++load[best];
    result.push_back(best);
  }
  return result;
}

struct AtomVars {
  Bits rank;  // level within the node's bag, least significant bit first
  Var proven = 0;
};

class AspEncoder final : public NodeEncoder {
 public:
  AspEncoder(const Program& program, const NiceTreeDecomposition& ntd, bool counters)
      : program_(program), ntd_(ntd), counters_(counters), vars_(ntd.nodes.size()), rulesAt_(ntd.nodes.size()) {
    // duplicates are dropped; supporting rules are balanced separately since
    // only they add vertices to a bag
    std::set<std::tuple<std::optional<Var>, std::vector<Var>, std::vector<Var>>> seen;
    std::vector<std::size_t> groups[2];
    for (std::size_t i = 0; i < program.rules.size(); ++i) {
      const Rule& r = program.rules[i];
      auto pos = r.posBody, neg = r.negBody;
      std::sort(pos.begin(), pos.end());
      std::sort(neg.begin(), neg.end());
      if (seen.emplace(r.head, std::move(pos), std::move(neg)).second) groups[supporting(r) ? 1 : 0].push_back(i);
    }
    for (const auto& group : groups) {
      std::vector<std::vector<std::size_t>> sets;
      for (std::size_t i : group) {
        std::vector<std::size_t> s;
        for (Var a : program.rules[i].atoms()) s.push_back(static_cast<std::size_t>(a) - 1);
        sets.push_back(std::move(s));
      }
      const auto attach = balanced_attachment(ntd, sets);
      for (std::size_t k = 0; k < attach.size(); ++k) rulesAt_[attach[k]].push_back(group[k]);
    }
    for (auto& rules : rulesAt_) std::sort(rules.begin(), rules.end());
  }

  /// A rule can justify its head only if its body is consistent and does not
  /// mention the head.
  static bool supporting(const Rule& r) {
    if (!r.head) return false;
    const auto has = [](const std::vector<Var>& atoms, Var a) {
      return std::find(atoms.begin(), atoms.end(), a) != atoms.end();
    };
    if (has(r.posBody, *r.head) || has(r.negBody, *r.head)) return false;
    return std::none_of(r.posBody.begin(), r.posBody.end(), [&](Var p) { return has(r.negBody, p); });
  }

  std::string_view name() const override { return counters_ ? "asp-levels" : "asp-tight"; }
  std::size_t reserved_vars() const override { return program_.atom_count(); }

  NodeEncoderOutput encode(const NodeEncodingContext& ctx) override {
    const std::size_t t = ctx.node;
    const NiceNode& node = ntd_.nodes[t];
    const auto& bag = node.bag;
    NodeEncoderOutput out;
    out.bits = counters_ ? counter_bits(bag.size()) : 0;
    std::vector<Var>& vs = out.outputBag;
    auto& clauses = out.localClauses;

    auto& mine = vars_[t];
    mine.resize(bag.size());
    for (std::size_t i = 0; i < bag.size(); ++i) {
      for (std::size_t k = 0; k < out.bits; ++k) mine[i].rank.push_back(ctx.pool.fresh());
      mine[i].proven = ctx.pool.fresh();
      vs.push_back(x(bag[i]));
      vs.insert(vs.end(), mine[i].rank.begin(), mine[i].rank.end());
      vs.push_back(mine[i].proven);
    }
    auto local = [&](std::size_t v) { return mine[pos(bag, v)]; };
    auto link = [&](const AtomVars& a) {
      vs.insert(vs.end(), a.rank.begin(), a.rank.end());
      vs.push_back(a.proven);
    };

    // rules attached here: the rule holds, and a support variable per headed rule
    std::vector<std::vector<Var>> supports(bag.size());
    for (std::size_t ri : rulesAt_[t]) {
      const Rule& rule = program_.rules[ri];
      Clause classical;
      for (Var p : rule.posBody) classical.push_back(Literal::neg(p));
      for (Var c : rule.negBody) classical.push_back(Literal::pos(c));
      if (rule.head) classical.push_back(Literal::pos(*rule.head));
      std::sort(classical.begin(), classical.end(),
                [](Literal a, Literal b) { return std::pair(a.var(), a.dimacs()) < std::pair(b.var(), b.dimacs()); });
      classical.erase(std::unique(classical.begin(), classical.end()), classical.end());
      const bool tautology = std::adjacent_find(classical.begin(), classical.end(), [](Literal a, Literal b) {
                               return a.var() == b.var();
                             }) != classical.end();
      if (!tautology) clauses.push_back(std::move(classical));
      if (!supporting(rule)) continue;
      const Var s = ctx.pool.fresh();
      vs.push_back(s);
      const std::size_t h = static_cast<std::size_t>(*rule.head) - 1;
      supports[pos(bag, h)].push_back(s);
      clauses.push_back({Literal::neg(s), Literal::pos(*rule.head)});
      for (Var c : rule.negBody) clauses.push_back({Literal::neg(s), Literal::neg(c)});
      for (Var p : rule.posBody) {
        clauses.push_back({Literal::neg(s), Literal::pos(p)});
        const std::size_t pv = static_cast<std::size_t>(p) - 1;
        if (!counters_) continue;
        const std::size_t b = out.bits;
        forbid(
            clauses, concat(local(pv).rank, local(h).rank),
            [b](std::uint64_t m) { return field(m, 0, b) >= field(m, b, b); }, Literal::neg(s));
      }
    }

    // proven(d) needs a reason: a child that proved it or a rule fired here
    auto justify = [&](std::size_t i, std::vector<Var> reasons) {
      Clause c{Literal::neg(mine[i].proven)};
      for (Var r : reasons) c.push_back(Literal::pos(r));
      for (Var s : supports[i]) c.push_back(Literal::pos(s));
      clauses.push_back(std::move(c));
    };

    switch (node.kind) {
      case NodeKind::Leaf:
        break;
      case NodeKind::Introduce: {
        const std::size_t c = node.children[0];
        const auto& childBag = ntd_.nodes[c].bag;
        const std::size_t ia = pos(bag, node.vertex);
        const std::size_t b = out.bits;
        if (counters_) {
          const std::uint64_t maxRank = childBag.size();
          forbid(clauses, mine[ia].rank, [maxRank](std::uint64_t m) { return m > maxRank; });
        }
        for (std::size_t j = 0; j < childBag.size(); ++j) {
          const AtomVars& cv = vars_[c][j];
          const std::size_t i = pos(bag, childBag[j]);
          link(cv);
          if (counters_) {
            const std::size_t bc = cv.rank.size();
            const Var g = ctx.pool.fresh();
            vs.push_back(g);
            define(clauses, g, concat(cv.rank, mine[ia].rank),
                   [bc, b](std::uint64_t m) { return field(m, 0, bc) >= field(m, bc, b); });
            const Bits in = concat(cv.rank, {g});
            for (std::size_t k = 0; k < b; ++k) {
              define(clauses, mine[i].rank[k], in,
                     [bc, k](std::uint64_t m) { return ((field(m, 0, bc) + field(m, bc, 1)) >> k) & 1U; });
            }
          }
          justify(i, {cv.proven});
        }
        justify(ia, {});
        break;
      }
      case NodeKind::Forget: {
        const std::size_t c = node.children[0];
        const auto& childBag = ntd_.nodes[c].bag;
        const std::size_t ja = pos(childBag, node.vertex);
        const AtomVars& forgotten = vars_[c][ja];
        out.childClauses.emplace_back(0, Clause{Literal::neg(x(node.vertex)), Literal::pos(forgotten.proven)});
        const std::size_t b = out.bits;
        if (counters_ && !bag.empty()) vs.insert(vs.end(), forgotten.rank.begin(), forgotten.rank.end());
        for (std::size_t i = 0; i < bag.size(); ++i) {
          const AtomVars& cv = vars_[c][pos(childBag, bag[i])];
          link(cv);
          if (counters_) {
            const std::size_t bc = cv.rank.size();
            const Var g = ctx.pool.fresh();
            vs.push_back(g);
            define(clauses, g, concat(cv.rank, forgotten.rank),
                   [bc](std::uint64_t m) { return field(m, 0, bc) > field(m, bc, bc); });
            const Bits in = concat(cv.rank, {g});
            for (std::size_t k = 0; k < b; ++k) {
              define(clauses, mine[i].rank[k], in, [bc, k](std::uint64_t m) {
                const std::uint64_t v = field(m, 0, bc), g1 = field(m, bc, 1);
                return v >= g1 && (((v - g1) >> k) & 1U);
              });
            }
          }
          justify(i, {cv.proven});
        }
        break;
      }
      case NodeKind::Join: {
        const auto& left = vars_[node.children[0]];
        const auto& right = vars_[node.children[1]];
        for (std::size_t i = 0; i < bag.size(); ++i) {
          link(left[i]);
          link(right[i]);
          for (std::size_t k = 0; k < out.bits; ++k) {
            for (const AtomVars* cv : {&left[i], &right[i]}) {
              clauses.push_back({Literal::neg(mine[i].rank[k]), Literal::pos(cv->rank[k])});
              clauses.push_back({Literal::pos(mine[i].rank[k]), Literal::neg(cv->rank[k])});
            }
          }
          justify(i, {left[i].proven, right[i].proven});
        }
        break;
      }
    }
    return out;
  }

 private:
  static Var x(std::size_t vertex) { return static_cast<Var>(vertex + 1); }
  static std::size_t pos(const std::vector<std::size_t>& bag, std::size_t v) {
    return static_cast<std::size_t>(std::lower_bound(bag.begin(), bag.end(), v) - bag.begin());
  }

  const Program& program_;
  const NiceTreeDecomposition& ntd_;
  bool counters_;
  std::vector<std::vector<AtomVars>> vars_;  // per node, parallel to its bag
  std::vector<std::vector<std::size_t>> rulesAt_;
};

}  // namespace

std::unique_ptr<NodeEncoder> make_asp_encoder(const Program& program, const NiceTreeDecomposition& ntd,
                                              bool withCounters) {
  return std::make_unique<AspEncoder>(program, ntd, withCounters);
}

DgReductionOutput reduce_asp_to_sat(const Program& program, const NiceTreeDecomposition& ntd) {
  if (ntd.vertexCount != program.atom_count()) {
    throw Error(ErrorCode::InvalidInputDecomposition, "decomposition vertex count differs from atom count");
  }
  const auto report = validate(ntd.as_tree_decomposition(), primal_graph(program));
  if (!report.ok()) {
    throw Error(ErrorCode::InvalidInputDecomposition, "invalid decomposition: " + report.violations.front().describe());
  }
  if (auto problems = check_nice(ntd); !problems.empty()) {
    throw Error(ErrorCode::InvalidInputDecomposition, "decomposition is not nice: " + problems.front());
  }
  const bool counters = !is_tight(program).tight;
  auto encoder = make_asp_encoder(program, ntd, counters);
  DgReductionOutput result = run_dg_reduction(ntd, *encoder);
  result.certificate = certify(result.perNode, counters);
  return result;
}

DgReductionOutput reduce_asp_to_sat(const Program& program, const TreeDecomposition& td) {
  if (td.vertexCount != program.atom_count()) {
    throw Error(ErrorCode::InvalidInputDecomposition, "decomposition vertex count differs from atom count");
  }
  return reduce_asp_to_sat(program, make_nice(td, primal_graph(program)));
}

bool verify_guided(const DgReductionOutput& output, std::vector<std::string>* problems) {
  bool ok = true;
  auto fail = [&](std::string msg) {
    ok = false;
    if (problems) problems->push_back(std::move(msg));
  };
  if (output.outputTd.vertexCount != output.formula.numVars) fail("decomposition and formula disagree on variables");
  for (const auto& v : validate(output.outputTd, primal_graph(output.formula)).violations) fail(v.describe());
  if (output.perNode.size() != output.outputTd.bags.size()) {
    fail("width rows do not match decomposition nodes");
    return ok;
  }
  for (std::size_t t = 0; t < output.perNode.size(); ++t) {
    const auto& row = output.perNode[t];
    const std::size_t actual = output.outputTd.bags[t].size();
    if (!node_bound_holds(row.inputBagSize, actual)) {
      fail("node " + std::to_string(t) + ": output bag of " + std::to_string(actual) + " exceeds bound for input bag of " +
           std::to_string(row.inputBagSize));
    }
  }
  return ok;
}

}  // namespace tw
