#include "cli.hpp"

#include "twsolve/dg_reduce.hpp"
#include "twsolve/dp_asp.hpp"
#include "twsolve/errors.hpp"
#include "twsolve/graph.hpp"
#include "twsolve/hybrid.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace tw::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string format;
  std::string heuristic = "min-fill";
  std::uint64_t seed = 0;
  std::size_t width = 10;
  std::size_t depth = 1;
  std::string subSolver;
  std::size_t jobs = 1;
  std::uint64_t budget = 4096;
  std::string statsOut;
  std::string tdPath;
  std::string graphPath;
  std::string graphFormat;
  std::string mode = "auto";
  std::string cnfOut;
  std::string tdOut;
  std::string reportOut;
};

enum class Format { Cnf, Gr, Lp, Td };

Format parse_format(const std::string& name) {
  if (name == "cnf") return Format::Cnf;
  if (name == "gr") return Format::Gr;
  if (name == "lp") return Format::Lp;
  if (name == "td") return Format::Td;
  throw UsageError("unknown format '" + name + "'");
}

Format format_of(const std::string& path, const std::string& forced) {
  if (!forced.empty()) return parse_format(forced);
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext.empty()) throw UsageError("cannot infer the format of '" + path + "'; pass --format");
  return parse_format(ext.substr(1));
}

std::string read_input(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::SyntaxError, "cannot open " + path);
  buf << file.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  file << content;
  if (!file) throw Error(ErrorCode::SyntaxError, "cannot write " + path);
}

PrimalGraph load_graph(const std::string& text, Format format) {
  switch (format) {
    case Format::Cnf:
      return primal_graph(parse_dimacs(text));
    case Format::Lp:
      return primal_graph(parse_program(text));
    case Format::Gr:
      return read_pace_graph(text);
    case Format::Td:
      break;
  }
  throw UsageError("a decomposition is not a graph input");
}

void require(Format actual, Format wanted, const char* what) {
  if (actual != wanted) throw UsageError(std::string("expected ") + what + " input");
}

SolverConfig solver_config(const Options& o) {
  SolverConfig c;
  if (o.width < 1) throw UsageError("--width must be at least 1");
  c.widthThreshold = o.width;
  c.maxNestingDepth = o.depth;
  c.seed = o.seed;
  c.heuristic = heuristic_from_string(o.heuristic);
  c.boundaryBudget = o.budget;
  c.jobs = std::max<std::size_t>(o.jobs, 1);
  if (!o.subSolver.empty()) {
    c.subSolver = SubSolverKind::External;
    c.command = o.subSolver;
  }
  return c;
}

void write_stats(const Options& o, const std::string& command, const HybridStats& s) {
  if (o.statsOut.empty()) return;
  nlohmann::ordered_json j;
  j["command"] = command;
  j["widthThreshold"] = o.width;
  j["maxNestingDepth"] = o.depth;
  j["widths"] = s.widths;
  j["maxDepth"] = s.maxDepth;
  j["recursions"] = s.recursions;
  j["components"] = s.components;
  j["residualsSolved"] = s.residualsSolved;
  j["subSolverCalls"] = s.subSolverCalls;
  j["seconds"] = s.seconds;
  j["projectedCounting"] = "not supported";
  write_file(o.statsOut, j.dump(2) + "\n");
}

int cmd_decompose(const Options& o, std::istream& in, std::ostream& out) {
  const PrimalGraph g = load_graph(read_input(o.input, in), format_of(o.input, o.format));
  write_pace_td(out, decompose(g, heuristic_from_string(o.heuristic), o.seed));
  return kOk;
}

int cmd_validate(const Options& o, std::istream& in, std::ostream& out) {
  const TreeDecomposition td = read_pace_td(read_input(o.tdPath, in));
  const PrimalGraph g = load_graph(read_input(o.graphPath, in), format_of(o.graphPath, o.graphFormat));
  const ValidationReport report = validate(td, g);
  for (const auto& v : report.violations) out << v.describe() << '\n';
  return report.ok() ? kOk : kUnsat;
}

int cmd_solve(const Options& o, std::istream& in, std::ostream& out, bool count) {
  require(format_of(o.input, o.format), Format::Cnf, "DIMACS CNF");
  const CnfFormula cnf = parse_dimacs(read_input(o.input, in));
  HybridStats stats;
  int code;
  if (count) {
    const BigInt n = hybrid_count(cnf, solver_config(o), &stats);
    out << "c s exact arb int " << n.get_str() << '\n';
    code = n > 0 ? kSat : kUnsat;
  } else {
    const bool sat = hybrid_decide(cnf, solver_config(o), &stats);
    out << (sat ? "s SATISFIABLE" : "s UNSATISFIABLE") << '\n';
    code = sat ? kSat : kUnsat;
  }
  write_stats(o, count ? "count" : "solve", stats);
  return code;
}

int cmd_asp(const Options& o, std::istream& in, std::ostream& out) {
  require(format_of(o.input, o.format), Format::Lp, "logic program");
  const Program program = parse_program(read_input(o.input, in));
  AspMode mode = AspMode::Auto;
  if (o.mode == "tight") mode = AspMode::Tight;
  if (o.mode == "normal") mode = AspMode::Normal;
  const bool sat = has_answer_set(program, mode, heuristic_from_string(o.heuristic), o.seed);
  out << (sat ? "SAT" : "UNSAT") << '\n';
  return sat ? kSat : kUnsat;
}

int cmd_reduce(const Options& o, std::istream& in, std::ostream& out) {
  require(format_of(o.input, o.format), Format::Lp, "logic program");
  const Program program = parse_program(read_input(o.input, in));
  const TreeDecomposition td =
      o.tdPath.empty() ? decompose(primal_graph(program), heuristic_from_string(o.heuristic), o.seed)
                       : read_pace_td(read_input(o.tdPath, in));
  const DgReductionOutput r = reduce_asp_to_sat(program, td);
  const WidthCertificate& c = r.certificate;

  std::ostringstream cnf;
  cnf << "c input width " << c.inputWidth << '\n'
      << "c output width " << c.outputWidth << '\n'
      << "c level counters " << (c.counters ? "yes" : "no") << '\n'
      << "c bound " << c.bound << '\n'
      << "c bound holds " << (c.boundHolds ? "yes" : "no") << '\n';
  write_dimacs(cnf, r.formula);
  if (o.cnfOut.empty()) {
    out << cnf.str();
  } else {
    write_file(o.cnfOut, cnf.str());
  }
  if (!o.tdOut.empty()) {
    std::ostringstream tdText;
    write_pace_td(tdText, r.outputTd);
    write_file(o.tdOut, tdText.str());
  }
  if (!o.reportOut.empty()) {
    nlohmann::ordered_json j;
    j["inputWidth"] = c.inputWidth;
    j["outputWidth"] = c.outputWidth;
    j["bitsPerAtom"] = c.bitsPerAtom;
    j["constant"] = c.constant;
    j["levelCounters"] = c.counters;
    j["bound"] = c.bound;
    j["boundHolds"] = c.boundHolds;
    auto& nodes = j["nodes"] = nlohmann::ordered_json::array();
    for (const auto& row : r.perNode) {
      nodes.push_back({{"node", row.node}, {"in", row.inputBagSize}, {"out", row.outputBagSize}, {"bits", row.bits}});
    }
    write_file(o.reportOut, j.dump(2) + "\n");
  }
  return kOk;
}

void print_widths(std::ostream& out, const PrimalGraph& g, std::uint64_t seed) {
  for (Heuristic h : {Heuristic::MinFill, Heuristic::MinDegree}) {
    out << "width " << to_string(h) << ' ' << decompose(g, h, seed).width() << '\n';
  }
}

int cmd_stats(const Options& o, std::istream& in, std::ostream& out) {
  const Format format = format_of(o.input, o.format);
  const std::string text = read_input(o.input, in);
  switch (format) {
    case Format::Cnf: {
      const CnfFormula cnf = parse_dimacs(text);
      const PrimalGraph g = primal_graph(cnf);
      out << "variables " << cnf.numVars << '\n' << "clauses " << cnf.clauses.size() << '\n';
      out << "edges " << g.edge_count() << '\n';
      print_widths(out, g, o.seed);
      break;
    }
    case Format::Lp: {
      const Program p = parse_program(text);
      const PrimalGraph g = primal_graph(p);
      out << "atoms " << p.atom_count() << '\n' << "rules " << p.rules.size() << '\n';
      out << "edges " << g.edge_count() << '\n';
      print_widths(out, g, o.seed);
      out << "tight " << (is_tight(p).tight ? "yes" : "no") << '\n';
      break;
    }
    case Format::Gr: {
      const PrimalGraph g = read_pace_graph(text);
      out << "vertices " << g.vertex_count() << '\n' << "edges " << g.edge_count() << '\n';
      print_widths(out, g, o.seed);
      break;
    }
    case Format::Td: {
      const TreeDecomposition td = read_pace_td(text);
      out << "vertices " << td.vertexCount << '\n' << "nodes " << td.node_count() << '\n';
      out << "width " << td.width() << '\n';
      break;
    }
  }
  return kOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SubSolverFailure:
    case ErrorCode::DepthExhaustedWithoutSubSolver:
      return kSubSolver;
    default:
      return kInput;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Treewidth-based SAT, #SAT and answer-set solving", "twsolve"};
  app.set_version_flag("--version", std::string("twsolve ") + TWSOLVE_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", o.input, "input file, or - for stdin")->required();
    sub->add_option("--format", o.format, "input format")->check(CLI::IsMember({"cnf", "gr", "lp", "td"}));
  };
  auto add_heuristic = [&](CLI::App* sub) {
    sub->add_option("--heuristic", o.heuristic, "elimination heuristic")
        ->check(CLI::IsMember({"min-fill", "min-degree"}));
    sub->add_option("--seed", o.seed, "tie-breaking seed (0: by vertex id)");
  };
  auto add_hybrid = [&](CLI::App* sub) {
    sub->add_option("-W,--width", o.width, "width threshold for plain dynamic programming");
    sub->add_option("-D,--depth", o.depth, "maximum nesting depth");
    sub->add_option("--sub-solver", o.subSolver, "external sub-solver command; {file} is the DIMACS path");
    sub->add_option("--jobs", o.jobs, "parallel sub-instance workers");
    sub->add_option("--boundary-budget", o.budget, "precompute boundary assignments up to this many");
    sub->add_option("--stats-out", o.statsOut, "write run statistics as JSON");
  };

  auto* decomposeCmd = app.add_subcommand("decompose", "emit a PACE tree decomposition of the primal graph");
  add_input(decomposeCmd);
  add_heuristic(decomposeCmd);

  auto* validateCmd = app.add_subcommand("validate", "check a tree decomposition against a graph");
  validateCmd->add_option("--td", o.tdPath, "decomposition (.td)")->required();
  validateCmd->add_option("--graph", o.graphPath, "graph, CNF or program")->required();
  validateCmd->add_option("--format", o.graphFormat, "format of --graph")->check(CLI::IsMember({"cnf", "gr", "lp"}));

  auto* solveCmd = app.add_subcommand("solve", "decide satisfiability of a CNF");
  add_input(solveCmd);
  add_heuristic(solveCmd);
  add_hybrid(solveCmd);

  auto* countCmd = app.add_subcommand("count", "count models of a CNF");
  add_input(countCmd);
  add_heuristic(countCmd);
  add_hybrid(countCmd);

  auto* aspCmd = app.add_subcommand("asp", "decide answer-set existence of a normal program");
  add_input(aspCmd);
  add_heuristic(aspCmd);
  aspCmd->add_option("--mode", o.mode, "solving route")->check(CLI::IsMember({"auto", "tight", "normal"}));

  auto* reduceCmd = app.add_subcommand("reduce", "translate between formalisms");
  reduceCmd->require_subcommand(1);
  auto* asp2sat = reduceCmd->add_subcommand("asp2sat", "normal program to CNF along a tree decomposition");
  add_input(asp2sat);
  add_heuristic(asp2sat);
  asp2sat->add_option("--td", o.tdPath, "decomposition of the program (default: computed)");
  asp2sat->add_option("--cnf-out", o.cnfOut, "write the CNF here instead of stdout");
  asp2sat->add_option("--td-out", o.tdOut, "write the output decomposition");
  asp2sat->add_option("--report-out", o.reportOut, "write the per-node width report as JSON");

  auto* statsCmd = app.add_subcommand("stats", "print size, heuristic widths and tightness");
  add_input(statsCmd);
  statsCmd->add_option("--seed", o.seed, "tie-breaking seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "e usage: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (decomposeCmd->parsed()) return cmd_decompose(o, in, out);
    if (validateCmd->parsed()) return cmd_validate(o, in, out);
    if (solveCmd->parsed()) return cmd_solve(o, in, out, false);
    if (countCmd->parsed()) return cmd_solve(o, in, out, true);
    if (aspCmd->parsed()) return cmd_asp(o, in, out);
    if (asp2sat->parsed()) return cmd_reduce(o, in, out);
    if (statsCmd->parsed()) return cmd_stats(o, in, out);
  } catch (const UsageError& e) {
    err << "e usage: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "e " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::invalid_argument& e) {
    err << "e usage: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "e internal: " << e.what() << '\n';
    return kInput;
  }
  err << "e usage: no subcommand\n";
  return kUsage;
}

}  // namespace tw::cli
