#include "twsolve/dp_asp.hpp"
#include "twsolve/errors.hpp"
#include "twsolve/graph.hpp"

#include <algorithm>

namespace tw {

StableModelOracleResult enumerate_answer_sets(const Program& program, std::size_t limit) {
  const std::size_t n = program.atom_count();
  if (n > kOracleMaxAtoms) {
    throw Error(ErrorCode::TooLargeForOracle, "answer-set oracle limited to " + std::to_string(kOracleMaxAtoms) +
                                                  " atoms, program has " + std::to_string(n));
  }
  struct MaskRule {
    std::int32_t head;  // -1 for constraints
    std::uint32_t pos = 0, neg = 0;
  };
  std::vector<MaskRule> rules;
  for (const auto& r : program.rules) {
    MaskRule m{r.head ? *r.head - 1 : -1};
    for (Var a : r.posBody) m.pos |= std::uint32_t{1} << (a - 1);
    for (Var a : r.negBody) m.neg |= std::uint32_t{1} << (a - 1);
    rules.push_back(m);
  }
  StableModelOracleResult result;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t s = 0; s < total; ++s) {
    const auto set = static_cast<std::uint32_t>(s);
    bool model = true;
    for (const auto& r : rules) {
      bool body = (set & r.pos) == r.pos && (set & r.neg) == 0;
      if (body && (r.head < 0 || !((set >> r.head) & 1U))) {
        model = false;
        break;
      }
    }
    if (!model) continue;
    std::uint32_t least = 0;
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& r : rules) {
        if (r.head < 0 || (set & r.neg) || (least & r.pos) != r.pos) continue;
        const std::uint32_t bit = std::uint32_t{1} << r.head;
        if (!(least & bit)) {
          least |= bit;
          changed = true;
        }
      }
    }
    if (least != set) continue;
    if (result.answerSets.size() == limit) {
      result.truncated = true;
      break;
    }
    std::vector<Var> atoms;
    for (std::size_t a = 0; a < n; ++a) {
      if ((set >> a) & 1U) atoms.push_back(static_cast<Var>(a + 1));
    }
    result.answerSets.push_back(std::move(atoms));
  }
  return result;
}

CnfFormula clark_completion(const Program& program) {
  if (!is_tight(program).tight) throw Error(ErrorCode::NotTight, "completion requires a tight program");
  const std::size_t n = program.atom_count();
  CnfFormula cnf;
  cnf.numVars = n;
  std::vector<std::vector<Var>> supports(n + 1);
  std::vector<bool> isFact(n + 1, false);
  for (const auto& rule : program.rules) {
    Clause satisfied;
    for (Var b : rule.posBody) satisfied.push_back(Literal::neg(b));
    for (Var c : rule.negBody) satisfied.push_back(Literal::pos(c));
    if (rule.is_constraint()) {
      cnf.clauses.push_back(std::move(satisfied));
      continue;
    }
    const Var h = *rule.head;
    if (rule.posBody.empty() && rule.negBody.empty()) {
      isFact[static_cast<std::size_t>(h)] = true;
      cnf.clauses.push_back({Literal::pos(h)});
      continue;
    }
    const Var body = static_cast<Var>(++cnf.numVars);
    for (Var b : rule.posBody) cnf.clauses.push_back({Literal::neg(body), Literal::pos(b)});
    for (Var c : rule.negBody) cnf.clauses.push_back({Literal::neg(body), Literal::neg(c)});
    satisfied.push_back(Literal::pos(body));
    cnf.clauses.push_back(std::move(satisfied));
    cnf.clauses.push_back({Literal::neg(body), Literal::pos(h)});
    supports[static_cast<std::size_t>(h)].push_back(body);
  }
  for (std::size_t a = 1; a <= n; ++a) {
    if (isFact[a]) continue;
    Clause support{Literal::neg(static_cast<Var>(a))};
    for (Var body : supports[a]) support.push_back(Literal::pos(body));
    cnf.clauses.push_back(std::move(support));
  }
  return cnf;
}

CompletionReport completion_report(const Program& program, Heuristic heuristic, std::uint64_t seed) {
  CompletionReport report;
  const CnfFormula cnf = clark_completion(program);
  report.auxiliaryVars = cnf.numVars - program.atom_count();
  for (const auto& rule : program.rules) report.largestRuleSize = std::max(report.largestRuleSize, rule.atoms().size());
  report.inputWidth = decompose(primal_graph(program), heuristic, seed).width();
  report.outputWidth = decompose(primal_graph(cnf), heuristic, seed).width();
  return report;
}

bool solve_tight_asp(const Program& program, Heuristic heuristic, std::uint64_t seed) {
  return solve_sat(clark_completion(program), heuristic, seed);
}

bool has_answer_set(const Program& program, AspMode mode, Heuristic heuristic, std::uint64_t seed) {
  if (mode == AspMode::Auto) mode = is_tight(program).tight ? AspMode::Tight : AspMode::Normal;
  if (mode == AspMode::Tight) return solve_tight_asp(program, heuristic, seed);
  return solve_normal_asp(program, heuristic, seed);
}

}  // namespace tw
