#include "twsolve/hybrid.hpp"

#include "twsolve/errors.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <functional>
#include <memory>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace tw {

Residual condition(const CnfFormula& cnf, const std::vector<Literal>& fixed) {
  Residual r;
  std::vector<signed char> value(cnf.numVars + 1, 0);
  auto assign = [&](Literal l) {
    signed char want = l.negative() ? -1 : 1;
    signed char& cur = value[static_cast<std::size_t>(l.var())];
    if (cur == -want) return false;
    cur = want;
    return true;
  };
  for (Literal l : fixed) {
    if (!assign(l)) {
      r.conflict = true;
      return r;
    }
  }
  auto truth = [&](Literal l) {
    signed char v = value[static_cast<std::size_t>(l.var())];
    return l.negative() ? -v : v;
  };

  std::vector<const Clause*> open;
  for (const Clause& c : cnf.clauses) open.push_back(&c);
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<const Clause*> still;
    for (const Clause* c : open) {
      std::size_t unassigned = 0;
      Literal last;
      bool sat = false;
      for (Literal l : *c) {
        const int t = truth(l);
        if (t > 0) {
          sat = true;
          break;
        }
        if (t == 0) {
          ++unassigned;
          last = l;
        }
      }
      if (sat) continue;
      if (unassigned == 0) {
        r.conflict = true;
        return r;
      }
      if (unassigned == 1) {
        assign(last);
        changed = true;
        continue;
      }
      still.push_back(c);
    }
    open = std::move(still);
  }

  std::vector<Var> renumber(cnf.numVars + 1, 0);
  for (const Clause* c : open) {
    for (Literal l : *c) {
      if (truth(l) == 0) renumber[static_cast<std::size_t>(l.var())] = 1;
    }
  }
  Var next = 0;
  for (std::size_t v = 1; v <= cnf.numVars; ++v) {
    if (renumber[v]) {
      renumber[v] = ++next;
    } else if (value[v] == 0) {
      ++r.freeVars;
    }
  }
  r.formula.numVars = static_cast<std::size_t>(next);
  for (const Clause* c : open) {
    Clause out;
    for (Literal l : *c) {
      if (truth(l) != 0) continue;
      const Var v = renumber[static_cast<std::size_t>(l.var())];
      out.push_back(l.negative() ? Literal::neg(v) : Literal::pos(v));
    }
    r.formula.clauses.push_back(std::move(out));
  }
  return r;
}

namespace {

BigInt pow2(std::size_t k) {
  BigInt out = 1;
  mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), k);
  return out;
}

void merge(HybridStats& into, const HybridStats& from) {
  into.widths.insert(into.widths.end(), from.widths.begin(), from.widths.end());
  into.maxDepth = std::max(into.maxDepth, from.maxDepth);
  into.recursions += from.recursions;
  into.components += from.components;
  into.subSolverCalls += from.subSolverCalls;
  into.residualsSolved += from.residualsSolved;
}

/// One component seen from its host node: its clauses over boundary and
/// interior variables, renumbered so the boundary comes first.
struct Piece {
  CnfFormula formula;
  std::size_t boundarySize = 0;
};

class Solver {
 public:
  Solver(const SolverConfig& config, HybridStats& stats, bool decide)
      : cfg_(config), stats_(stats), decide_(decide) {}

  BigInt solve(const CnfFormula& cnf, std::size_t depth) {
    stats_.maxDepth = std::max(stats_.maxDepth, depth);
    if (depth > cfg_.maxNestingDepth) throw std::logic_error("nesting depth exceeded");
    const PrimalGraph graph = primal_graph(cnf);
    const TreeDecomposition td = decompose(graph, cfg_.heuristic, cfg_.seed);
    stats_.widths.push_back(td.width());
    SatDpOptions options;
    options.mode = decide_ ? DpMode::Decide : DpMode::Count;
    if (td.width() <= static_cast<long>(cfg_.widthThreshold)) return run_sat_dp(cnf, make_nice(td), options);

    const Abstraction a = build_abstraction(graph, cfg_.widthThreshold, cfg_.heuristic, cfg_.seed);
    stats_.components += a.components.size();
    std::vector<std::size_t> componentOf(cnf.numVars, a.components.size());
    for (std::size_t i = 0; i < a.components.size(); ++i) {
      for (std::size_t v : a.components[i].vertices) componentOf[v] = i;
    }

    CnfFormula kept;
    kept.numVars = cnf.numVars;
    std::vector<Piece> pieces(a.components.size());
    std::vector<std::vector<Var>> local(a.components.size());
    for (std::size_t i = 0; i < a.components.size(); ++i) {
      const auto& c = a.components[i];
      local[i].assign(cnf.numVars + 1, 0);
      Var next = 0;
      for (std::size_t v : c.boundary) local[i][v + 1] = ++next;
      for (std::size_t v : c.vertices) local[i][v + 1] = ++next;
      pieces[i].formula.numVars = static_cast<std::size_t>(next);
      pieces[i].boundarySize = c.boundary.size();
      const auto& bag = a.ntd.nodes[c.host].bag;
      if (!std::includes(bag.begin(), bag.end(), c.boundary.begin(), c.boundary.end())) {
        throw std::logic_error("component boundary not inside its host bag");
      }
    }
    for (const Clause& clause : cnf.clauses) {
      std::size_t owner = a.components.size();
      for (Literal l : clause) owner = std::min(owner, componentOf[static_cast<std::size_t>(l.var()) - 1]);
      if (owner == a.components.size()) {
        kept.clauses.push_back(clause);
        continue;
      }
      Clause mapped;
      for (Literal l : clause) {
        const Var v = local[owner][static_cast<std::size_t>(l.var())];
        if (v == 0) throw std::logic_error("clause spans two removed components");
        mapped.push_back(l.negative() ? Literal::neg(v) : Literal::pos(v));
      }
      pieces[owner].formula.clauses.push_back(std::move(mapped));
    }

    for (std::size_t i = 0; i < a.components.size(); ++i) {
      auto weights = std::make_shared<Weights>(make_weights(pieces[i], depth));
      options.factors.push_back({a.components[i].host, a.components[i].boundary,
                                 [weights](const std::vector<bool>& beta) { return weights->get(beta); }});
    }
    return run_sat_dp(kept, a.ntd, options);
  }

 private:
  /// Interior count per boundary assignment, computed up front when the
  /// boundary is small enough and memoized per row otherwise.
  struct Weights {
    std::function<BigInt(const std::vector<bool>&)> compute;
    std::vector<BigInt> table;  // indexed by assignment rank when precomputed
    std::unordered_map<std::vector<bool>, BigInt> memo;

    BigInt get(const std::vector<bool>& beta) {
      if (!table.empty()) {
        std::size_t rank = 0;
        for (std::size_t i = 0; i < beta.size(); ++i) rank |= static_cast<std::size_t>(beta[i]) << i;
        return table[rank];
      }
      auto it = memo.find(beta);
      if (it == memo.end()) it = memo.emplace(beta, compute(beta)).first;
      return it->second;
    }
  };

  Weights make_weights(const Piece& piece, std::size_t depth) {
    Weights w;
    const SolverConfig& cfg = cfg_;
    const bool decide = decide_;
    auto evaluate = [&cfg, decide, piece, depth](const std::vector<bool>& beta, HybridStats& stats) {
      std::vector<Literal> fixed;
      for (std::size_t i = 0; i < beta.size(); ++i) {
        const Var v = static_cast<Var>(i + 1);
        fixed.push_back(beta[i] ? Literal::pos(v) : Literal::neg(v));
      }
      Solver sub(cfg, stats, decide);
      return sub.residual_value(condition(piece.formula, fixed), depth);
    };
    const std::size_t b = piece.boundarySize;
    if (b < 63 && (std::uint64_t{1} << b) <= cfg_.boundaryBudget) {
      const std::size_t total = std::size_t{1} << b;
      w.table.resize(total);
      std::vector<HybridStats> local(total);
      auto run = [&](std::size_t from, std::size_t step) {
        std::vector<bool> beta(b);
        for (std::size_t r = from; r < total; r += step) {
          for (std::size_t i = 0; i < b; ++i) beta[i] = (r >> i) & 1U;
          w.table[r] = evaluate(beta, local[r]);
        }
      };
      const std::size_t jobs = std::clamp<std::size_t>(cfg_.jobs, 1, total);
      if (jobs == 1) {
        run(0, 1);
      } else {
        std::vector<std::exception_ptr> errors(jobs);
        std::vector<std::thread> threads;
        for (std::size_t j = 0; j < jobs; ++j) {
          threads.emplace_back([&, j] {
            try {
              run(j, jobs);
            } catch (...) {
              errors[j] = std::current_exception();
            }
          });
        }
        for (auto& t : threads) t.join();
        for (auto& e : errors) {
          if (e) std::rethrow_exception(e);
        }
      }
      for (const auto& s : local) merge(stats_, s);  // in rank order, whatever the thread schedule
    } else {
      HybridStats* stats = &stats_;
      w.compute = [evaluate, stats](const std::vector<bool>& beta) { return evaluate(beta, *stats); };
    }
    return w;
  }

  BigInt residual_value(const Residual& r, std::size_t depth) {
    if (r.conflict) return 0;
    const BigInt scale = decide_ ? BigInt(1) : pow2(r.freeVars);
    if (r.formula.clauses.empty()) return decide_ ? BigInt(1) : scale * pow2(r.formula.numVars);
    ++stats_.residualsSolved;
    if (depth < cfg_.maxNestingDepth) {
      const long width = decompose(primal_graph(r.formula), cfg_.heuristic, cfg_.seed).width();
      stats_.widths.push_back(width);
      if (width <= static_cast<long>(cfg_.widthThreshold)) {
        ++stats_.recursions;
        return scale * solve(r.formula, depth + 1);
      }
    }
    ++stats_.subSolverCalls;
    const SubSolverMode mode = decide_ ? SubSolverMode::Decide : SubSolverMode::Count;
    const BigInt value = cfg_.subSolver == SubSolverKind::Internal
                             ? internal_sub_solve(r.formula, mode)
                             : external_sub_solve(r.formula, mode, cfg_.command, cfg_.tmpdir);
    return scale * value;
  }

  const SolverConfig& cfg_;
  HybridStats& stats_;
  bool decide_;
};

BigInt run(const CnfFormula& cnf, const SolverConfig& config, HybridStats* stats, bool decide) {
  if (config.widthThreshold < 1) throw std::invalid_argument("width threshold must be at least 1");
  if (config.subSolver == SubSolverKind::External && config.command.empty()) {
    throw std::invalid_argument("external sub-solver needs a command");
  }
  const auto start = std::chrono::steady_clock::now();
  HybridStats local;
  Solver solver(config, local, decide);
  BigInt result = solver.solve(cnf, 0);
  local.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (stats) *stats = std::move(local);
  return result;
}

}  // namespace

BigInt hybrid_count(const CnfFormula& cnf, const SolverConfig& config, HybridStats* stats) {
  return run(cnf, config, stats, false);
}

bool hybrid_decide(const CnfFormula& cnf, const SolverConfig& config, HybridStats* stats) {
  return run(cnf, config, stats, true) != 0;
}

}  // namespace tw
