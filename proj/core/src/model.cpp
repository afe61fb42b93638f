#include "twsolve/model.hpp"

#include "twsolve/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace tw {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::LiteralOutOfRange: return "LiteralOutOfRange";
    case ErrorCode::MissingTerminator: return "MissingTerminator";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnsupportedDisjunction: return "UnsupportedDisjunction";
    case ErrorCode::InvalidInputDecomposition: return "InvalidInputDecomposition";
    case ErrorCode::DecompositionMismatch: return "DecompositionMismatch";
    case ErrorCode::WidthLimitExceeded: return "WidthLimitExceeded";
    case ErrorCode::TooLargeForOracle: return "TooLargeForOracle";
    case ErrorCode::NotTight: return "NotTight";
    case ErrorCode::SubSolverFailure: return "SubSolverFailure";
    case ErrorCode::DepthExhaustedWithoutSubSolver: return "DepthExhaustedWithoutSubSolver";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
      code_(code),
      line_(line) {}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_int(std::string_view tok, long long& value) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

CnfFormula parse_dimacs(std::istream& in) {
  CnfFormula cnf;
  bool haveHeader = false;
  long long declaredClauses = 0;
  std::size_t lineNo = 0;
  std::size_t clauseStartLine = 0;
  Clause current;
  std::string line;

  auto finish_clause = [&] {
    Clause unique;
    bool tautology = false;
    for (Literal lit : current) {
      if (std::find(unique.begin(), unique.end(), ~lit) != unique.end()) tautology = true;
      if (std::find(unique.begin(), unique.end(), lit) == unique.end()) unique.push_back(lit);
    }
    if (tautology) {
      ++cnf.tautologiesDropped;
    } else {
      cnf.clauses.push_back(std::move(unique));
    }
    current.clear();
  };

  std::size_t seenClauses = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "c" || tokens[0][0] == 'c') continue;
    if (tokens[0] == "p") {
      long long n = 0;
      if (haveHeader || tokens.size() != 4 || tokens[1] != "cnf" || !parse_int(tokens[2], n) ||
          !parse_int(tokens[3], declaredClauses) || n < 0 || declaredClauses < 0) {
        throw Error(ErrorCode::MalformedHeader, "expected 'p cnf <vars> <clauses>'", lineNo);
      }
      cnf.numVars = static_cast<std::size_t>(n);
      haveHeader = true;
      continue;
    }
    if (!haveHeader) throw Error(ErrorCode::MalformedHeader, "clause data before 'p cnf' header", lineNo);
    for (auto tok : tokens) {
      long long value = 0;
      if (!parse_int(tok, value)) {
        throw Error(ErrorCode::SyntaxError, "not an integer literal: '" + std::string(tok) + "'", lineNo);
      }
      if (value == 0) {
        finish_clause();
        ++seenClauses;
        continue;
      }
      if (current.empty()) clauseStartLine = lineNo;
      if (std::llabs(value) > static_cast<long long>(cnf.numVars)) {
        throw Error(ErrorCode::LiteralOutOfRange,
                    "literal " + std::string(tok) + " exceeds declared variable count " + std::to_string(cnf.numVars),
                    lineNo);
      }
      current.push_back(Literal(static_cast<std::int32_t>(value)));
    }
  }
  if (!haveHeader) throw Error(ErrorCode::MalformedHeader, "missing 'p cnf' header", lineNo ? lineNo : 1);
  if (!current.empty()) throw Error(ErrorCode::MissingTerminator, "clause not terminated by 0", clauseStartLine);
  if (seenClauses != static_cast<std::size_t>(declaredClauses)) {
    throw Error(ErrorCode::MalformedHeader,
                "header declares " + std::to_string(declaredClauses) + " clauses, found " + std::to_string(seenClauses),
                lineNo);
  }
  return cnf;
}

CnfFormula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

void write_dimacs(std::ostream& out, const CnfFormula& cnf) {
  out << "p cnf " << cnf.numVars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& clause : cnf.clauses) {
    for (Literal lit : clause) out << lit.dimacs() << ' ';
    out << "0\n";
  }
}

std::vector<bool> constrained_vars(const CnfFormula& cnf) {
  std::vector<bool> used(cnf.numVars + 1, false);
  for (const auto& clause : cnf.clauses) {
    for (Literal lit : clause) used[static_cast<std::size_t>(lit.var())] = true;
  }
  return used;
}

std::vector<Var> Rule::atoms() const {
  std::vector<Var> out(posBody.begin(), posBody.end());
  out.insert(out.end(), negBody.begin(), negBody.end());
  if (head) out.push_back(*head);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// ASP grammar

namespace {

class ProgramParser {
 public:
  explicit ProgramParser(std::string text) : text_(std::move(text)) {}

  Program parse() {
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) break;
      parse_statement();
    }
    return std::move(program_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw Error(ErrorCode::SyntaxError, msg, line_); }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') ++line_;
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool peek(std::string_view s) {
    skip_space();
    return text_.compare(pos_, s.size(), s) == 0;
  }

  bool at_atom_start() {
    skip_space();
    return pos_ < text_.size() && text_[pos_] >= 'a' && text_[pos_] <= 'z';
  }

  std::string identifier() {
    skip_space();
    if (!at_atom_start()) fail("expected atom");
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  Var intern(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    program_.atomNames.push_back(name);
    Var id = static_cast<Var>(program_.atomNames.size());
    ids_.emplace(name, id);
    return id;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void parse_body(Rule& rule) {
    skip_space();
    if (peek(".")) return;
    while (true) {
      std::string name = identifier();
      bool negated = false;
      if (name == "not" && at_atom_start()) {
        negated = true;
        name = identifier();
      }
      Var atom = intern(name);
      auto& target = negated ? rule.negBody : rule.posBody;
      if (std::find(target.begin(), target.end(), atom) == target.end()) target.push_back(atom);
      skip_space();
      if (peek(",")) {
        ++pos_;
        continue;
      }
      break;
    }
  }

  void parse_statement() {
    Rule rule;
    if (peek(":-")) {
      pos_ += 2;
      parse_body(rule);
      expect('.');
      program_.rules.push_back(std::move(rule));
      return;
    }
    std::string head = identifier();
    if (head == "not") fail("'not' is not allowed in a rule head");
    skip_space();
    if (peek("|") || peek(";") || peek(",")) {
      throw Error(ErrorCode::UnsupportedDisjunction, "disjunctive heads are not supported", line_);
    }
    rule.head = intern(head);
    if (peek(":-")) {
      pos_ += 2;
      parse_body(rule);
    }
    expect('.');
    program_.rules.push_back(std::move(rule));
  }

  std::string text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  Program program_;
  std::unordered_map<std::string, Var> ids_;
};

}  // namespace

Program parse_program(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return ProgramParser(std::move(text)).parse();
}

Program parse_program(std::string_view text) { return ProgramParser(std::string(text)).parse(); }

void write_program(std::ostream& out, const Program& program) {
  for (const auto& rule : program.rules) {
    if (rule.head) out << program.name(*rule.head);
    bool hasBody = !rule.posBody.empty() || !rule.negBody.empty();
    if (hasBody || rule.is_constraint()) {
      out << (rule.head ? " :- " : ":- ");
      bool first = true;
      for (Var a : rule.posBody) {
        out << (first ? "" : ", ") << program.name(a);
        first = false;
      }
      for (Var a : rule.negBody) {
        out << (first ? "" : ", ") << "not " << program.name(a);
        first = false;
      }
    }
    out << ".\n";
  }
}

TightnessResult is_tight(const Program& program) {
  TightnessResult result;
  result.graph.atomCount = program.atom_count();
  for (const auto& rule : program.rules) {
    if (!rule.head) continue;
    for (Var b : rule.posBody) result.graph.arcs.emplace_back(b, *rule.head);
  }
  auto& arcs = result.graph.arcs;
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  result.tight = topological_order(result.graph).has_value();
  return result;
}

std::optional<std::vector<Var>> topological_order(const DependencyGraph& graph) {
  const std::size_t n = graph.atomCount;
  std::vector<std::vector<Var>> succ(n + 1);
  std::vector<std::size_t> indeg(n + 1, 0);
  for (auto [from, to] : graph.arcs) {
    succ[static_cast<std::size_t>(from)].push_back(to);
    ++indeg[static_cast<std::size_t>(to)];
  }
  std::vector<Var> order;
  std::vector<Var> ready;
  for (std::size_t v = n; v >= 1; --v) {
    if (indeg[v] == 0) ready.push_back(static_cast<Var>(v));
  }
  while (!ready.empty()) {
    Var v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (Var w : succ[static_cast<std::size_t>(v)]) {
      if (--indeg[static_cast<std::size_t>(w)] == 0) ready.push_back(w);
    }
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

}  // namespace tw
