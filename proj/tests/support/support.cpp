#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tw::test {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

CnfFormula random_cnf(Rng& rng, std::size_t numVars, std::size_t numClauses, std::size_t maxLen) {
  CnfFormula cnf;
  cnf.numVars = numVars;
  std::vector<Var> vars(numVars);
  std::iota(vars.begin(), vars.end(), 1);
  for (std::size_t i = 0; i < numClauses && numVars > 0; ++i) {
    const std::size_t len = pick(rng, 1, std::min(maxLen, numVars));
    std::shuffle(vars.begin(), vars.end(), rng);
    Clause c;
    for (std::size_t j = 0; j < len; ++j) c.push_back(pick(rng, 0, 1) ? Literal::pos(vars[j]) : Literal::neg(vars[j]));
    std::sort(c.begin(), c.end());
    cnf.clauses.push_back(std::move(c));
  }
  return cnf;
}

Program random_program(Rng& rng, std::size_t atoms, std::size_t rules, std::size_t maxRuleAtoms) {
  Program p;
  for (std::size_t a = 1; a <= atoms; ++a) p.atomNames.push_back("a" + std::to_string(a));
  std::vector<Var> ids(atoms);
  std::iota(ids.begin(), ids.end(), 1);
  for (std::size_t i = 0; i < rules && atoms > 0; ++i) {
    std::shuffle(ids.begin(), ids.end(), rng);
    const std::size_t size = pick(rng, 1, std::min(maxRuleAtoms, atoms));
    Rule r;
    std::size_t next = 0;
    if (pick(rng, 0, 7) != 0) r.head = ids[next++];
    for (; next < size; ++next) (pick(rng, 0, 2) ? r.posBody : r.negBody).push_back(ids[next]);
    if (!r.head && r.posBody.empty() && r.negBody.empty()) r.posBody.push_back(ids[0]);
    // occasionally let the head depend on itself through the body
    if (r.head && pick(rng, 0, 19) == 0) r.posBody.push_back(*r.head);
    std::sort(r.posBody.begin(), r.posBody.end());
    std::sort(r.negBody.begin(), r.negBody.end());
    p.rules.push_back(std::move(r));
  }
  return p;
}

PrimalGraph random_tree(Rng& rng, std::size_t n) {
  PrimalGraph g(n);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (std::size_t i = 1; i < n; ++i) g.add_edge(perm[i], perm[pick(rng, 0, i - 1)]);
  return g;
}

PrimalGraph complete_graph(std::size_t n) {
  PrimalGraph g(n);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  g.add_clique(all);
  return g;
}

CnfFormula high_width_instance(std::uint64_t seed) {
  Rng rng(seed * 7919 + 17);
  constexpr std::size_t kCore = 32;
  const std::size_t tail = pick(rng, 16, 28);
  CnfFormula cnf;
  cnf.numVars = kCore + tail;
  auto lit = [&](std::size_t v) { return pick(rng, 0, 1) ? Literal::pos(static_cast<Var>(v)) : Literal::neg(static_cast<Var>(v)); };

  Clause wide;
  for (std::size_t v = 1; v <= kCore; ++v) wide.push_back(lit(v));
  cnf.clauses.push_back(wide);
  for (std::size_t v = 1; v < kCore; ++v) {
    if (pick(rng, 0, 2) == 0) continue;
    cnf.clauses.push_back({Literal::neg(static_cast<Var>(v)), Literal::pos(static_cast<Var>(v + 1))});
  }
  for (std::size_t v = kCore + 1; v < kCore + tail; ++v) {
    cnf.clauses.push_back({lit(v), lit(v + 1)});
    if (v + 2 <= kCore + tail && pick(rng, 0, 2) == 0) cnf.clauses.push_back({lit(v), lit(v + 1), lit(v + 2)});
  }
  for (int i = 0; i < 2; ++i) cnf.clauses.push_back({lit(pick(rng, 1, kCore)), lit(pick(rng, kCore + 1, kCore + tail))});
  return cnf;
}

Program ordering_program(std::size_t k) {
  Program p;
  for (std::size_t a = 1; a <= k; ++a) p.atomNames.push_back("a" + std::to_string(a));
  for (std::size_t i = 1; i <= k; ++i) {
    for (std::size_t j = i + 1; j <= k; ++j) {
      Rule r;
      r.head = static_cast<Var>(i);
      r.posBody = {static_cast<Var>(j)};
      p.rules.push_back(r);
    }
  }
  if (k >= 2) {
    Rule r;
    r.head = static_cast<Var>(k);
    r.posBody = {1};
    p.rules.push_back(r);
  }
  return p;
}

// ---------------------------------------------------------------------------
// CDCL

namespace {

class Cdcl {
 public:
  explicit Cdcl(const CnfFormula& cnf)
      : n_(cnf.numVars), watches_(2 * n_), value_(n_, -1), level_(n_, 0), reason_(n_, -1), seen_(n_, 0),
        activity_(n_, 0.0), phase_(n_, 0) {
    for (const Clause& clause : cnf.clauses) {
      std::vector<int> c;
      for (Literal l : clause) c.push_back(encode(l));
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      bool taut = false;
      for (std::size_t i = 1; i < c.size(); ++i) taut = taut || (c[i] ^ 1) == c[i - 1];
      if (taut) continue;
      if (c.empty()) {
        unsat_ = true;
        continue;
      }
      if (c.size() == 1) {
        units_.push_back(c[0]);
        continue;
      }
      add(std::move(c));
    }
  }

  bool solve() {
    if (unsat_) return false;
    for (int u : units_) {
      if (lit_value(u) == 0) return false;
      if (lit_value(u) < 0) enqueue(u, -1);
    }
    if (propagate() >= 0) return false;
    std::size_t conflicts = 0, restartAt = 100, restarts = 0;
    for (;;) {
      const int confl = propagate();
      if (confl >= 0) {
        if (trailLim_.empty()) return false;
        ++conflicts;
        int backLevel = 0;
        std::vector<int> learnt = analyze(confl, backLevel);
        backtrack(backLevel);
        if (learnt.size() == 1) {
          enqueue(learnt[0], -1);
        } else {
          const int ci = add(learnt);
          enqueue(learnt[0], ci);
        }
        varInc_ /= 0.95;
        continue;
      }
      if (conflicts >= restartAt) {
        backtrack(0);
        conflicts = 0;
        restartAt = 100 * luby(++restarts);
      }
      int best = -1;
      for (std::size_t v = 0; v < n_; ++v) {
        if (value_[v] < 0 && (best < 0 || activity_[v] > activity_[static_cast<std::size_t>(best)])) {
          best = static_cast<int>(v);
        }
      }
      if (best < 0) return true;
      trailLim_.push_back(trail_.size());
      enqueue(2 * best + (phase_[static_cast<std::size_t>(best)] ? 0 : 1), -1);
    }
  }

 private:
  static int encode(Literal l) { return 2 * (l.var() - 1) + (l.negative() ? 1 : 0); }
  static std::size_t var(int lit) { return static_cast<std::size_t>(lit >> 1); }

  static std::size_t luby(std::size_t i) {
    std::size_t size = 1, seq = 0;
    while (size < i + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != i) {
      size = (size - 1) >> 1;
      --seq;
      i %= size;
    }
    return std::size_t{1} << seq;
  }

  int lit_value(int lit) const {
    const int v = value_[var(lit)];
    if (v < 0) return -1;
    return (lit & 1) ? 1 - v : v;
  }

  int add(std::vector<int> c) {
    const int ci = static_cast<int>(clauses_.size());
    watches_[static_cast<std::size_t>(c[0])].push_back(ci);
    watches_[static_cast<std::size_t>(c[1])].push_back(ci);
    clauses_.push_back(std::move(c));
    return ci;
  }

  void enqueue(int lit, int reason) {
    const std::size_t v = var(lit);
    value_[v] = (lit & 1) ? 0 : 1;
    level_[v] = static_cast<int>(trailLim_.size());
    reason_[v] = reason;
    trail_.push_back(lit);
  }

  int propagate() {
    while (qhead_ < trail_.size()) {
      const int falseLit = trail_[qhead_++] ^ 1;
      auto& ws = watches_[static_cast<std::size_t>(falseLit)];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        const int ci = ws[i++];
        auto& c = clauses_[static_cast<std::size_t>(ci)];
        if (c[0] == falseLit) std::swap(c[0], c[1]);
        if (lit_value(c[0]) == 1) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (lit_value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[static_cast<std::size_t>(c[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (lit_value(c[0]) == 0) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          qhead_ = trail_.size();
          return ci;
        }
        enqueue(c[0], ci);
      }
      ws.resize(j);
    }
    return -1;
  }

  std::vector<int> analyze(int confl, int& backLevel) {
    std::vector<int> learnt{0};
    int pathC = 0, p = -1;
    std::size_t idx = trail_.size();
    const int current = static_cast<int>(trailLim_.size());
    do {
      const auto& c = clauses_[static_cast<std::size_t>(confl)];
      for (std::size_t k = (p < 0 ? 0 : 1); k < c.size(); ++k) {
        const std::size_t v = var(c[k]);
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        activity_[v] += varInc_;
        if (activity_[v] > 1e100) {
          for (double& a : activity_) a *= 1e-100;
          varInc_ *= 1e-100;
        }
        if (level_[v] == current) {
          ++pathC;
        } else {
          learnt.push_back(c[k]);
        }
      }
      while (!seen_[var(trail_[--idx])]) {
      }
      p = trail_[idx];
      confl = reason_[var(p)];
      seen_[var(p)] = 0;
      --pathC;
    } while (pathC > 0);
    learnt[0] = p ^ 1;
    backLevel = 0;
    std::size_t maxAt = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      seen_[var(learnt[k])] = 0;
      if (level_[var(learnt[k])] > backLevel) {
        backLevel = level_[var(learnt[k])];
        maxAt = k;
      }
    }
    if (learnt.size() > 1) std::swap(learnt[1], learnt[maxAt]);
    return learnt;
  }

  void backtrack(int level) {
    if (static_cast<int>(trailLim_.size()) <= level) return;
    const std::size_t keep = trailLim_[static_cast<std::size_t>(level)];
    for (std::size_t i = trail_.size(); i-- > keep;) {
      const std::size_t v = var(trail_[i]);
      phase_[v] = static_cast<char>(value_[v]);
      value_[v] = -1;
      reason_[v] = -1;
    }
    trail_.resize(keep);
    trailLim_.resize(static_cast<std::size_t>(level));
    qhead_ = keep;
  }

  std::size_t n_;
  std::vector<std::vector<int>> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<int> value_, level_, reason_;
  std::vector<char> seen_;
  std::vector<double> activity_;
  std::vector<char> phase_;
  std::vector<int> trail_;
  std::vector<std::size_t> trailLim_;
  std::size_t qhead_ = 0;
  double varInc_ = 1.0;
  std::vector<int> units_;
  bool unsat_ = false;
};

// ---------------------------------------------------------------------------
// component counter

using IntClauses = std::vector<std::vector<int>>;

BigInt pow2(std::size_t k) {
  BigInt r = 1;
  mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), k);
  return r;
}

class ComponentCounter {
 public:
  /// Count over exactly the variables in `vars` (sorted).
  BigInt count(IntClauses clauses, std::vector<int> vars) {
    // unit propagation
    for (;;) {
      int unit = 0;
      for (const auto& c : clauses) {
        if (c.empty()) return 0;
        if (c.size() == 1) {
          unit = c[0];
          break;
        }
      }
      if (unit == 0) break;
      clauses = assign(clauses, unit);
      std::erase(vars, std::abs(unit));
    }
    if (clauses.empty()) return pow2(vars.size());

    // components over variables occurring in clauses
    std::map<int, int> parent;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& c : clauses) {
      for (int l : c) parent.try_emplace(std::abs(l), std::abs(l));
    }
    for (const auto& c : clauses) {
      for (std::size_t i = 1; i < c.size(); ++i) parent[find(std::abs(c[i]))] = find(std::abs(c[0]));
    }
    const std::size_t freeVars = vars.size() - parent.size();
    std::map<int, IntClauses> groups;
    for (auto& c : clauses) groups[find(std::abs(c[0]))].push_back(std::move(c));
    BigInt total = pow2(freeVars);
    for (auto& [root, group] : groups) {
      total *= solve_component(std::move(group));
      if (total == 0) return 0;
    }
    return total;
  }

 private:
  static IntClauses assign(const IntClauses& clauses, int lit) {
    IntClauses out;
    for (const auto& c : clauses) {
      if (std::find(c.begin(), c.end(), lit) != c.end()) continue;
      std::vector<int> reduced;
      for (int l : c) {
        if (l != -lit) reduced.push_back(l);
      }
      out.push_back(std::move(reduced));
    }
    return out;
  }

  BigInt solve_component(IntClauses clauses) {
    for (auto& c : clauses) std::sort(c.begin(), c.end());
    std::sort(clauses.begin(), clauses.end());
    std::vector<int> vars;
    std::map<int, std::size_t> occurrences;
    for (const auto& c : clauses) {
      for (int l : c) {
        vars.push_back(std::abs(l));
        ++occurrences[std::abs(l)];
      }
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

    std::ostringstream key;
    for (const auto& c : clauses) {
      for (int l : c) key << l << ' ';
      key << '|';
    }
    if (auto it = cache_.find(key.str()); it != cache_.end()) return it->second;

    int branch = vars.front();
    for (auto [v, k] : occurrences) {
      if (k > occurrences[branch]) branch = v;
    }
    std::vector<int> rest = vars;
    std::erase(rest, branch);
    BigInt result = count(assign(clauses, branch), rest) + count(assign(clauses, -branch), rest);
    cache_.emplace(key.str(), result);
    return result;
  }

  std::map<std::string, BigInt> cache_;
};

}  // namespace

bool cdcl_satisfiable(const CnfFormula& cnf) { return Cdcl(cnf).solve(); }

BigInt component_count(const CnfFormula& cnf) {
  IntClauses clauses;
  bool hasEmpty = false;
  for (const Clause& c : cnf.clauses) {
    std::vector<int> ints;
    for (Literal l : c) ints.push_back(l.dimacs());
    std::sort(ints.begin(), ints.end());
    ints.erase(std::unique(ints.begin(), ints.end()), ints.end());
    bool taut = false;
    for (int l : ints) taut = taut || std::binary_search(ints.begin(), ints.end(), -l);
    if (taut) continue;
    hasEmpty = hasEmpty || ints.empty();
    clauses.push_back(std::move(ints));
  }
  if (hasEmpty) return 0;
  std::vector<int> vars(cnf.numVars);
  std::iota(vars.begin(), vars.end(), 1);
  return ComponentCounter().count(std::move(clauses), std::move(vars));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace tw::test
