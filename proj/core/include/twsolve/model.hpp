#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tw {

/// Variables and atoms are dense 1-based ids.
using Var = std::int32_t;

/// A signed variable occurrence, DIMACS style: +v is v, -v is not v.
class Literal {
 public:
  constexpr Literal() = default;
  constexpr explicit Literal(std::int32_t dimacs) : value_(dimacs) {}
  static constexpr Literal pos(Var v) { return Literal(v); }
  static constexpr Literal neg(Var v) { return Literal(-v); }

  constexpr Var var() const { return value_ < 0 ? -value_ : value_; }
  constexpr bool negative() const { return value_ < 0; }
  constexpr std::int32_t dimacs() const { return value_; }
  constexpr Literal operator~() const { return Literal(-value_); }

  friend constexpr auto operator<=>(Literal, Literal) = default;

 private:
  std::int32_t value_ = 0;
};

using Clause = std::vector<Literal>;

struct CnfFormula {
  std::size_t numVars = 0;
  std::vector<Clause> clauses;
  // clauses containing both polarities of a variable, dropped while parsing
  std::size_t tautologiesDropped = 0;

  bool operator==(const CnfFormula& other) const {
    return numVars == other.numVars && clauses == other.clauses;
  }
};

/// Parses DIMACS CNF. Tautological clauses are dropped and counted;
/// duplicate literals inside a clause are collapsed.
CnfFormula parse_dimacs(std::istream& in);
CnfFormula parse_dimacs(std::string_view text);
void write_dimacs(std::ostream& out, const CnfFormula& cnf);

/// Variables that occur in at least one clause.
std::vector<bool> constrained_vars(const CnfFormula& cnf);

/// `head <- posBody, not negBody`; an absent head is an integrity constraint.
struct Rule {
  std::optional<Var> head;
  std::vector<Var> posBody;
  std::vector<Var> negBody;

  bool is_constraint() const { return !head.has_value(); }
  /// head, positive body and negative body atoms, sorted and unique
  std::vector<Var> atoms() const;

  bool operator==(const Rule&) const = default;
};

/// Normal ground program. Atom i (1-based) is named `atomNames[i - 1]`.
struct Program {
  std::vector<std::string> atomNames;
  std::vector<Rule> rules;

  std::size_t atom_count() const { return atomNames.size(); }
  const std::string& name(Var atom) const { return atomNames.at(static_cast<std::size_t>(atom) - 1); }

  bool operator==(const Program&) const = default;
};

/// Parses the ground grammar `h :- a, not b.`, `h.` and `:- body.`;
/// `%` starts a comment. Atoms are interned in order of first appearance.
Program parse_program(std::istream& in);
Program parse_program(std::string_view text);
void write_program(std::ostream& out, const Program& program);

/// Positive dependency graph: arc b -> h for each rule h <- B+ with b in B+.
struct DependencyGraph {
  std::size_t atomCount = 0;
  std::vector<std::pair<Var, Var>> arcs;  // (from, to), sorted, unique
};

struct TightnessResult {
  bool tight = false;
  DependencyGraph graph;
};

/// Tight iff the positive dependency graph is acyclic (self-arcs are cycles).
TightnessResult is_tight(const Program& program);

/// Topological order of the atoms w.r.t. `graph`, or nullopt on a cycle.
std::optional<std::vector<Var>> topological_order(const DependencyGraph& graph);

}  // namespace tw
