#include "twsolve/errors.hpp"
#include "twsolve/treedecomp.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace tw {

TreeDecomposition read_pace_td(std::istream& in) {
  TreeDecomposition td;
  std::string line;
  std::size_t lineNo = 0;
  bool haveHeader = false;
  long long declaredBags = 0, declaredMax = 0, declaredVertices = 0;
  std::size_t headerLine = 0;
  std::vector<char> bagSeen;
  while (std::getline(in, line)) {
    ++lineNo;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == 'c') continue;
    if (first == "s") {
      std::string kind;
      if (haveHeader || !(ls >> kind >> declaredBags >> declaredMax >> declaredVertices) || kind != "td" ||
          declaredBags < 1 || declaredMax < 0 || declaredVertices < 0) {
        throw Error(ErrorCode::MalformedHeader, "expected 's td <bags> <max bag size> <vertices>'", lineNo);
      }
      haveHeader = true;
      headerLine = lineNo;
      td.vertexCount = static_cast<std::size_t>(declaredVertices);
      td.bags.assign(static_cast<std::size_t>(declaredBags), {});
      bagSeen.assign(td.bags.size(), 0);
      continue;
    }
    if (!haveHeader) throw Error(ErrorCode::MalformedHeader, "data before 's td' header", lineNo);
    if (first == "b") {
      long long id = 0;
      if (!(ls >> id) || id < 1 || id > declaredBags) {
        throw Error(ErrorCode::SyntaxError, "bag index out of range", lineNo);
      }
      auto idx = static_cast<std::size_t>(id - 1);
      if (bagSeen[idx]) throw Error(ErrorCode::SyntaxError, "bag " + std::to_string(id) + " defined twice", lineNo);
      bagSeen[idx] = 1;
      long long v = 0;
      auto& bag = td.bags[idx];
      while (ls >> v) {
        if (v < 1 || v > declaredVertices) {
          throw Error(ErrorCode::LiteralOutOfRange, "vertex " + std::to_string(v) + " out of range", lineNo);
        }
        bag.push_back(static_cast<std::size_t>(v - 1));
      }
      if (!ls.eof()) throw Error(ErrorCode::SyntaxError, "malformed bag line", lineNo);
      std::sort(bag.begin(), bag.end());
      bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
      if (static_cast<long long>(bag.size()) > declaredMax) {
        throw Error(ErrorCode::MalformedHeader, "bag larger than declared maximum", lineNo);
      }
      continue;
    }
    std::istringstream es(line);
    long long a = 0, b = 0;
    std::string rest;
    if (!(es >> a >> b) || (es >> rest)) throw Error(ErrorCode::SyntaxError, "expected tree edge 'i j'", lineNo);
    if (a < 1 || b < 1 || a > declaredBags || b > declaredBags) {
      throw Error(ErrorCode::SyntaxError, "tree edge references unknown bag", lineNo);
    }
    td.edges.emplace_back(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1));
  }
  if (!haveHeader) throw Error(ErrorCode::MalformedHeader, "missing 's td' header", lineNo ? lineNo : 1);
  for (std::size_t i = 0; i < bagSeen.size(); ++i) {
    if (!bagSeen[i]) throw Error(ErrorCode::SyntaxError, "bag " + std::to_string(i + 1) + " never defined", headerLine);
  }
  if (static_cast<long long>(td.max_bag_size()) != declaredMax) {
    throw Error(ErrorCode::MalformedHeader, "declared max bag size does not match bags", headerLine);
  }
  if (td.edges.size() + 1 != td.bags.size()) {
    throw Error(ErrorCode::SyntaxError, "a tree over " + std::to_string(td.bags.size()) + " bags needs " +
                                            std::to_string(td.bags.size() - 1) + " edges",
                lineNo);
  }
  td.root = 0;
  return td;
}

TreeDecomposition read_pace_td(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_pace_td(in);
}

void write_pace_td(std::ostream& out, const TreeDecomposition& td) {
  out << "s td " << td.node_count() << ' ' << td.max_bag_size() << ' ' << td.vertexCount << '\n';
  for (std::size_t t = 0; t < td.node_count(); ++t) {
    out << "b " << t + 1;
    for (std::size_t v : td.bags[t]) out << ' ' << v + 1;
    out << '\n';
  }
  for (auto [a, b] : td.edges) out << a + 1 << ' ' << b + 1 << '\n';
}

}  // namespace tw
