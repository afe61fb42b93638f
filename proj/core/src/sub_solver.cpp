#include "twsolve/hybrid.hpp"

#include "twsolve/errors.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string_view>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

namespace tw {

namespace {

struct MaskClause {
  std::uint32_t pos = 0, neg = 0;
};

class Counter {
 public:
  Counter(std::vector<MaskClause> clauses, std::size_t vars, bool decide)
      : clauses_(std::move(clauses)), full_(vars == 32 ? ~0U : (std::uint32_t{1} << vars) - 1), decide_(decide) {}

  std::uint64_t count(std::uint32_t assigned, std::uint32_t values) const {
    std::uint32_t branch = 0;
    for (bool changed = true; changed;) {
      changed = false;
      branch = 0;
      for (const auto& c : clauses_) {
        if ((values & c.pos & assigned) || (~values & c.neg & assigned)) continue;
        const std::uint32_t open = (c.pos | c.neg) & ~assigned;
        if (open == 0) return 0;
        if (std::has_single_bit(open)) {
          assigned |= open;
          if (c.pos & open) values |= open;
          changed = true;
        } else if (branch == 0) {
          branch = open;
        }
      }
    }
    if (branch == 0) return std::uint64_t{1} << std::popcount(full_ & ~assigned);
    const std::uint32_t bit = branch & (~branch + 1);
    const std::uint64_t on = count(assigned | bit, values | bit);
    if (decide_ && on) return on;
    return on + count(assigned | bit, values & ~bit);
  }

 private:
  std::vector<MaskClause> clauses_;
  std::uint32_t full_;
  bool decide_;
};

/// Removes the file when it goes out of scope.
class TempFile {
 public:
  explicit TempFile(const std::string& dir) {
    std::string pattern = dir + "/twsolve-XXXXXX.cnf";
    std::vector<char> buf(pattern.begin(), pattern.end());
    buf.push_back('\0');
    const int fd = mkstemps(buf.data(), 4);
    if (fd < 0) throw Error(ErrorCode::SubSolverFailure, "cannot create temporary file in " + dir);
    close(fd);
    path_ = buf.data();
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  ~TempFile() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::string temp_dir(const std::string& configured) {
  if (!configured.empty()) return configured;
  for (const char* var : {"TWSOLVE_TMPDIR", "TMPDIR"}) {
    if (const char* v = std::getenv(var); v && *v) return v;
  }
  return "/tmp";
}

}  // namespace

BigInt internal_sub_solve(const CnfFormula& cnf, SubSolverMode mode) {
  if (cnf.numVars > kInternalMaxVars) {
    throw Error(ErrorCode::DepthExhaustedWithoutSubSolver,
                "sub-instance with " + std::to_string(cnf.numVars) + " variables exceeds the internal limit of " +
                    std::to_string(kInternalMaxVars));
  }
  std::vector<MaskClause> masks;
  for (const Clause& c : cnf.clauses) {
    MaskClause m;
    for (Literal l : c) (l.negative() ? m.neg : m.pos) |= std::uint32_t{1} << (l.var() - 1);
    masks.push_back(m);
  }
  const Counter counter(std::move(masks), cnf.numVars, mode == SubSolverMode::Decide);
  const std::uint64_t n = counter.count(0, 0);
  if (mode == SubSolverMode::Decide) return n ? 1 : 0;
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(n), 0, 0, &n);
  return out;
}

BigInt external_sub_solve(const CnfFormula& cnf, SubSolverMode mode, const std::string& commandTemplate,
                          const std::string& tmpdir) {
  const TempFile file(temp_dir(tmpdir));
  {
    std::ofstream out(file.path());
    write_dimacs(out, cnf);
    if (!out) throw Error(ErrorCode::SubSolverFailure, "cannot write " + file.path());
  }
  std::string command = commandTemplate;
  if (auto at = command.find("{file}"); at != std::string::npos) {
    command.replace(at, 6, file.path());
  } else {
    command += " " + file.path();
  }
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) throw Error(ErrorCode::SubSolverFailure, "cannot start: " + command);
  std::string output;
  char buf[4096];
  for (std::size_t got; (got = std::fread(buf, 1, sizeof buf, pipe)) > 0;) output.append(buf, got);
  const int status = pclose(pipe);
  if (status < 0 || !WIFEXITED(status)) throw Error(ErrorCode::SubSolverFailure, "sub-solver did not exit normally");
  const int code = WEXITSTATUS(status);
  if (code != 0 && code != 10 && code != 20) {
    throw Error(ErrorCode::SubSolverFailure, "sub-solver exited with status " + std::to_string(code));
  }

  std::optional<BigInt> count;
  std::optional<bool> sat;
  std::istringstream lines(output);
  for (std::string line; std::getline(lines, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    constexpr std::string_view kCount = "c s exact arb int ";
    if (line.starts_with(kCount)) {
      BigInt n;
      if (n.set_str(line.substr(kCount.size()), 10) != 0 || n < 0) {
        throw Error(ErrorCode::SubSolverFailure, "unparsable count line: " + line);
      }
      count = n;
    } else if (line == "s SATISFIABLE") {
      sat = true;
    } else if (line == "s UNSATISFIABLE") {
      sat = false;
    }
  }
  if (count) return mode == SubSolverMode::Decide ? BigInt(*count > 0 ? 1 : 0) : *count;
  if (sat) {
    if (mode == SubSolverMode::Decide) return *sat ? 1 : 0;
    if (!*sat) return 0;
    throw Error(ErrorCode::SubSolverFailure, "sub-solver reported satisfiability but no model count");
  }
  throw Error(ErrorCode::SubSolverFailure, "sub-solver printed neither a count nor a status line");
}

}  // namespace tw
