#include "support.hpp"

#include "cli.hpp"
#include "twsolve/graph.hpp"
#include "twsolve/treedecomp.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace tw;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args, const std::string& stdinText = {}) {
  std::istringstream in(stdinText);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& rel) { return std::string(TWSOLVE_TEST_DATA) + "/" + rel; }

class ScratchDir {
 public:
  ScratchDir() : path_(std::filesystem::temp_directory_path() / ("twsolve-cli-" + std::to_string(::getpid()))) {
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content = {}) const {
    const auto p = (path_ / name).string();
    if (!content.empty()) std::ofstream(p) << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

void check_error_line(const Result& r) {
  CHECK(r.err.starts_with("e "));
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("count prints the model-counting line") {
    ScratchDir dir;
    const Result r = run_cli({"count", dir.file("f.cnf", "p cnf 3 2\n1 2 0\n-2 3 0\n")});
    CHECK(r.code == 10);
    CHECK(r.out == "c s exact arb int 4\n");
  }

  TEST_CASE("solve uses the competition exit codes") {
    ScratchDir dir;
    CHECK(run_cli({"solve", dir.file("sat.cnf", "p cnf 1 1\n1 0\n")}).code == 10);
    const Result r = run_cli({"solve", dir.file("unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n")});
    CHECK(r.code == 20);
    CHECK(r.out == "s UNSATISFIABLE\n");
  }

  TEST_CASE("asp decides answer-set existence") {
    ScratchDir dir;
    const Result odd = run_cli({"asp", dir.file("odd.lp", "a :- not a.\n")});
    CHECK(odd.code == 20);
    CHECK(odd.out == "UNSAT\n");
    const std::string loop = dir.file("loop.lp", "a :- b.\nb :- a.\nb :- not c.\n");
    for (const char* mode : {"auto", "normal"}) {
      const Result r = run_cli({"asp", loop, "--mode", mode});
      CHECK(r.code == 10);
      CHECK(r.out == "SAT\n");
    }
    const Result tight = run_cli({"asp", loop, "--mode", "tight"});
    CHECK(tight.code == 2);
    check_error_line(tight);
  }

  TEST_CASE("stdin needs an explicit format") {
    CHECK(run_cli({"count", "-", "--format", "cnf"}, "p cnf 2 1\n1 2 0\n").out == "c s exact arb int 3\n");
    const Result r = run_cli({"count", "-"}, "p cnf 2 1\n1 2 0\n");
    CHECK(r.code == 1);
    check_error_line(r);
  }

  TEST_CASE("validate") {
    ScratchDir dir;
    const std::string gr = dir.file("g.gr", "p tw 3 2\n1 2\n2 3\n");
    const Result ok = run_cli({"validate", "--td", dir.file("ok.td", "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n"), "--graph", gr});
    CHECK(ok.code == 0);
    CHECK(ok.out.empty());
    const Result bad = run_cli({"validate", "--td", dir.file("bad.td", "s td 2 2 3\nb 1 1 2\nb 2 3\n1 2\n"), "--graph", gr});
    CHECK(bad.code == 20);
    CHECK_FALSE(bad.out.empty());
  }

  TEST_CASE("decompose output validates") {
    ScratchDir dir;
    const std::string cnf = data("golden/chain.cnf");
    const Result r = run_cli({"decompose", cnf, "--heuristic", "min-degree", "--seed", "3"});
    REQUIRE(r.code == 0);
    const TreeDecomposition td = read_pace_td(r.out);
    CHECK(validate(td, primal_graph(parse_dimacs(test::read_file(cnf)))).ok());
    CHECK(run_cli({"decompose", cnf, "--heuristic", "min-degree", "--seed", "3"}).out == r.out);
  }

  TEST_CASE("reduce asp2sat writes a checkable decomposition") {
    ScratchDir dir;
    const std::string lp = data("golden/cycle.lp");
    const std::string cnfPath = dir.file("out.cnf"), tdPath = dir.file("out.td"), report = dir.file("out.json");
    const Result r =
        run_cli({"reduce", "asp2sat", lp, "--cnf-out", cnfPath, "--td-out", tdPath, "--report-out", report});
    REQUIRE(r.code == 0);
    const CnfFormula cnf = parse_dimacs(test::read_file(cnfPath));
    CHECK(validate(read_pace_td(test::read_file(tdPath)), primal_graph(cnf)).ok());
    CHECK(test::read_file(report).find("\"boundHolds\": true") != std::string::npos);

    const std::string tdIn = dir.file("in.td", run_cli({"decompose", lp}).out);
    CHECK(run_cli({"reduce", "asp2sat", lp, "--td", tdIn}).code == 0);
  }

  TEST_CASE("stats-out writes json") {
    ScratchDir dir;
    const std::string stats = dir.file("stats.json");
    CHECK(run_cli({"count", data("golden/wide.cnf"), "-W", "2", "--stats-out", stats}).code == 10);
    const std::string json = test::read_file(stats);
    CHECK(json.find("\"subSolverCalls\"") != std::string::npos);
    CHECK(json.find("\"widths\"") != std::string::npos);
  }

  TEST_CASE("version and help succeed everywhere") {
    for (std::vector<std::string> prefix :
         {std::vector<std::string>{}, {"decompose"}, {"validate"}, {"solve"}, {"count"}, {"asp"}, {"reduce"},
          {"reduce", "asp2sat"}, {"stats"}}) {
      for (const char* flag : {"--version", "--help"}) {
        auto args = prefix;
        args.push_back(flag);
        const Result r = run_cli(args);
        CHECK_MESSAGE(r.code == 0, flag);
        CHECK_FALSE(r.out.empty());
      }
    }
  }

  TEST_CASE("error paths are single prefixed lines") {
    ScratchDir dir;
    const std::vector<std::pair<std::vector<std::string>, int>> cases = {
        {{"count", dir.file("missing.cnf")}, 2},
        {{"count", dir.file("broken.cnf", "p cnf 2 1\n1 3 0\n")}, 2},
        {{"asp", dir.file("disj.lp", "a | b.\n")}, 2},
        {{"count", dir.file("ok.cnf", "p cnf 1 0\n"), "--bogus"}, 1},
        {{"count", dir.file("ok2.cnf", "p cnf 1 0\n"), "-W", "0"}, 1},
        {{"frobnicate"}, 1},
        {{}, 1},
        {{"count", data("golden/wide.cnf"), "-W", "2", "-D", "0", "--sub-solver", "false {file}"}, 3},
        {{"stats", dir.file("unknown.xyz", "x")}, 1},
        {{"validate", "--td", dir.file("t.td", "s td 1 1 1\nb 1 1\n"), "--graph", dir.file("g.gr", "p tw 1 0\n"),
          "--format", "lp"},
         2},
    };
    for (const auto& [args, code] : cases) {
      const Result r = run_cli(args);
      const std::string what = args.empty() ? std::string("<none>") : args.front();
      CHECK_MESSAGE(r.code == code, what);
      check_error_line(r);
    }
  }

  TEST_CASE("golden outputs") {
    std::ifstream list(data("golden/cases.txt"));
    REQUIRE(list);
    int cases = 0;
    for (std::string line; std::getline(list, line);) {
      if (line.empty() || line[0] == '#') continue;
      // <expected file> <exit code> <args...>; "@" expands to the golden directory
      std::istringstream fields(line);
      std::string expected;
      int code = 0;
      fields >> expected >> code;
      std::vector<std::string> args;
      for (std::string a; fields >> a;) {
        if (a.starts_with("@")) a = data("golden/" + a.substr(1));
        args.push_back(a);
      }
      const Result r = run_cli(args);
      CHECK_MESSAGE(r.code == code, line);
      CHECK_MESSAGE(r.out == test::read_file(data("golden/" + expected)), line);
      ++cases;
    }
    CHECK(cases >= 10);
  }

  TEST_CASE("the binary behaves like run()") {
    ScratchDir dir;
    const std::string out = dir.file("out.txt");
    const std::string cmd = std::string(TWSOLVE_BINARY) + " count " + data("golden/chain.cnf") + " > " + out;
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 10);
    CHECK(test::read_file(out) == run_cli({"count", data("golden/chain.cnf")}).out);
  }
}
