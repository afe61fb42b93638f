#include "twsolve/errors.hpp"
#include "twsolve/treedecomp.hpp"

#include <algorithm>
#include <sstream>

namespace tw {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Leaf: return "leaf";
    case NodeKind::Introduce: return "introduce";
    case NodeKind::Forget: return "forget";
    case NodeKind::Join: return "join";
  }
  return "?";
}

std::size_t NiceTreeDecomposition::max_bag_size() const {
  std::size_t best = 0;
  for (const auto& n : nodes) best = std::max(best, n.bag.size());
  return best;
}

std::vector<std::size_t> NiceTreeDecomposition::depths() const {
  std::vector<std::size_t> depth(nodes.size(), 0);
  for (std::size_t t = nodes.size(); t-- > 0;) {
    for (std::size_t c : nodes[t].children) depth[c] = depth[t] + 1;
  }
  return depth;
}

TreeDecomposition NiceTreeDecomposition::as_tree_decomposition() const {
  TreeDecomposition td;
  td.vertexCount = vertexCount;
  td.root = root();
  for (std::size_t t = 0; t < nodes.size(); ++t) {
    td.bags.push_back(nodes[t].bag);
    for (std::size_t c : nodes[t].children) td.edges.emplace_back(c, t);
  }
  return td;
}

NiceTreeDecomposition make_nice(const TreeDecomposition& td, const PrimalGraph& graph) {
  auto report = validate(td, graph);
  if (!report.ok()) {
    throw Error(ErrorCode::InvalidInputDecomposition, "decomposition is invalid: " + report.violations.front().describe());
  }
  return make_nice(td);
}

NiceTreeDecomposition make_nice(const TreeDecomposition& td) {
  NiceTreeDecomposition out;
  out.vertexCount = td.vertexCount;
  RootedTree rt = td.rooted();

  auto add = [&](NiceNode node) {
    out.nodes.push_back(std::move(node));
    return out.nodes.size() - 1;
  };
  // forget what the target lacks, then introduce what it adds, ascending
  auto transition = [&](std::size_t from, const std::vector<std::size_t>& target) {
    std::vector<std::size_t> drop, gain;
    const auto current = out.nodes[from].bag;
    std::set_difference(current.begin(), current.end(), target.begin(), target.end(), std::back_inserter(drop));
    std::set_difference(target.begin(), target.end(), current.begin(), current.end(), std::back_inserter(gain));
    std::vector<std::size_t> bag = current;
    for (std::size_t v : drop) {
      bag.erase(std::lower_bound(bag.begin(), bag.end(), v));
      from = add({NodeKind::Forget, v, {from}, bag});
    }
    for (std::size_t v : gain) {
      bag.insert(std::lower_bound(bag.begin(), bag.end(), v), v);
      from = add({NodeKind::Introduce, v, {from}, bag});
    }
    return from;
  };

  std::vector<std::size_t> top(td.node_count());
  for (std::size_t t : rt.postOrder) {
    const auto& bag = td.bags[t];
    const auto& kids = rt.children[t];
    if (kids.empty()) {
      top[t] = transition(add({NodeKind::Leaf, 0, {}, {}}), bag);
      continue;
    }
    std::size_t acc = transition(top[kids[0]], bag);
    for (std::size_t i = 1; i < kids.size(); ++i) {
      std::size_t other = transition(top[kids[i]], bag);
      acc = add({NodeKind::Join, 0, {acc, other}, bag});
    }
    top[t] = acc;
  }
  transition(top[rt.root], {});
  return out;
}

std::vector<std::size_t> attachment_nodes(const NiceTreeDecomposition& ntd,
                                          const std::vector<std::vector<std::size_t>>& vertexSets) {
  std::vector<std::vector<std::size_t>> occurrences(ntd.vertexCount);
  for (std::size_t t = 0; t < ntd.nodes.size(); ++t) {
    for (std::size_t v : ntd.nodes[t].bag) {
      if (v < occurrences.size()) occurrences[v].push_back(t);
    }
  }
  const auto depth = ntd.depths();
  std::vector<std::size_t> out;
  out.reserve(vertexSets.size());
  std::vector<std::size_t> candidates, scratch;
  for (const auto& set : vertexSets) {
    if (set.empty()) {
      out.push_back(ntd.root());
      continue;
    }
    if (set.front() >= occurrences.size()) {
      out.push_back(kNoNode);
      continue;
    }
    candidates = occurrences[set.front()];
    for (std::size_t i = 1; i < set.size() && !candidates.empty(); ++i) {
      scratch.clear();
      if (set[i] >= occurrences.size()) {
        candidates.clear();
        break;
      }
      const auto& occ = occurrences[set[i]];
      std::set_intersection(candidates.begin(), candidates.end(), occ.begin(), occ.end(), std::back_inserter(scratch));
      candidates.swap(scratch);
    }
    std::size_t best = kNoNode;
    for (std::size_t t : candidates) {
      if (best == kNoNode || depth[t] < depth[best]) best = t;
    }
    out.push_back(best);
  }
  return out;
}

std::vector<std::string> check_nice(const NiceTreeDecomposition& ntd) {
  std::vector<std::string> problems;
  auto complain = [&](std::size_t t, const std::string& what) {
    std::ostringstream os;
    os << "node " << t << " (" << to_string(ntd.nodes[t].kind) << "): " << what;
    problems.push_back(os.str());
  };
  if (ntd.nodes.empty()) {
    problems.emplace_back("no nodes");
    return problems;
  }
  if (!ntd.nodes.back().bag.empty()) complain(ntd.root(), "root bag not empty");
  for (std::size_t t = 0; t < ntd.nodes.size(); ++t) {
    const auto& node = ntd.nodes[t];
    if (!std::is_sorted(node.bag.begin(), node.bag.end())) complain(t, "bag not sorted");
    for (std::size_t c : node.children) {
      if (c >= t) complain(t, "child stored after parent");
    }
    switch (node.kind) {
      case NodeKind::Leaf:
        if (!node.children.empty() || !node.bag.empty()) complain(t, "leaf must be childless with empty bag");
        break;
      case NodeKind::Introduce:
      case NodeKind::Forget: {
        if (node.children.size() != 1) {
          complain(t, "expected exactly one child");
          break;
        }
        auto bag = ntd.nodes[node.children[0]].bag;
        bool introduce = node.kind == NodeKind::Introduce;
        bool present = std::binary_search(bag.begin(), bag.end(), node.vertex);
        if (present == introduce) {
          complain(t, "vertex presence in child bag is wrong");
          break;
        }
        if (introduce) {
          bag.insert(std::lower_bound(bag.begin(), bag.end(), node.vertex), node.vertex);
        } else {
          bag.erase(std::lower_bound(bag.begin(), bag.end(), node.vertex));
        }
        if (bag != node.bag) complain(t, "bag differs from child by more than one vertex");
        break;
      }
      case NodeKind::Join:
        if (node.children.size() != 2) {
          complain(t, "expected two children");
          break;
        }
        if (ntd.nodes[node.children[0]].bag != node.bag || ntd.nodes[node.children[1]].bag != node.bag) {
          complain(t, "children bags differ from join bag");
        }
        break;
    }
  }
  return problems;
}

}  // namespace tw
