#pragma once

#include "twsolve/model.hpp"
#include "twsolve/treedecomp.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tw {

/// Hands out fresh output variables in allocation order.
class VarPool {
 public:
  explicit VarPool(std::size_t reserved = 0) : next_(static_cast<Var>(reserved)) {}
  Var fresh() { return ++next_; }
  std::size_t size() const { return static_cast<std::size_t>(next_); }

 private:
  Var next_;
};

/// What one node contributes. Every clause in `localClauses` must only use
/// variables of `outputBag`; a clause in `childClauses` must fit the output
/// bag of the given child (index into the node's children).
struct NodeEncoderOutput {
  std::vector<Var> outputBag;
  std::vector<Clause> localClauses;
  std::vector<std::pair<std::size_t, Clause>> childClauses;
  std::size_t bits = 0;  // level-counter bits per atom (0 when counters are omitted)
};

struct NodeEncodingContext {
  const NiceTreeDecomposition& input;
  std::size_t node;
  std::span<const NodeEncoderOutput* const> children;
  VarPool& pool;
};

/// Per-node encoder of a decomposition-guided reduction. The output bag of a
/// node may depend only on its input bag and its children's outputs.
class NodeEncoder {
 public:
  virtual ~NodeEncoder() = default;
  virtual std::string_view name() const = 0;
  /// Number of variables reserved before encoding starts (ids 1..n).
  virtual std::size_t reserved_vars() const = 0;
  virtual NodeEncoderOutput encode(const NodeEncodingContext& ctx) = 0;
};

struct NodeWidthRow {
  std::size_t node = 0;
  std::size_t inputBagSize = 0;
  std::size_t outputBagSize = 0;
  std::size_t bits = 0;  // level-counter bits per atom at this node (0 when counters are omitted)
};

/// Bounds |out bag| <= c * |in bag| * (bits + 1) per node, or c * |in bag|
/// when level counters are omitted (tight programs).
struct WidthCertificate {
  long inputWidth = -1;
  long outputWidth = -1;
  std::size_t bitsPerAtom = 0;  // bits at the widest input bag
  double constant = 0;
  bool counters = true;
  bool boundHolds = false;
  std::string bound;  // human readable bound with the constant filled in
};

struct DgReductionOutput {
  CnfFormula formula;
  TreeDecomposition outputTd;  // same node ids and tree edges as the input decomposition
  std::vector<NodeWidthRow> perNode;
  WidthCertificate certificate;
};

/// Runs `encoder` bottom-up over `ntd` and assembles the formula and its
/// decomposition. Throws std::logic_error when an encoder emits a clause
/// outside the bag it belongs to.
DgReductionOutput run_dg_reduction(const NiceTreeDecomposition& ntd, NodeEncoder& encoder);

/// Constant c in |out bag| <= c * |in bag| * (ceil(log2(|in bag| + 1)) + 1).
/// The largest ratio seen on random programs is 5 (single-atom forget nodes).
inline constexpr double kDgWidthConstant = 8.0;

/// ceil(log2(bagSize + 1)): counter width for a bag of that many atoms.
std::size_t counter_bits(std::size_t bagSize);

/// Encoders for normal programs: with per-node level counters (any normal
/// program) or without them (sound for tight programs only).
std::unique_ptr<NodeEncoder> make_asp_encoder(const Program& program, const NiceTreeDecomposition& ntd,
                                              bool withCounters);

/// Normal program -> CNF, satisfiable iff the program has an answer set.
/// Counters are omitted when the program is tight. InvalidInputDecomposition
/// if `ntd` does not decompose the program's primal graph.
DgReductionOutput reduce_asp_to_sat(const Program& program, const NiceTreeDecomposition& ntd);
/// Converts `td` to nice form first; the output follows the nice tree.
DgReductionOutput reduce_asp_to_sat(const Program& program, const TreeDecomposition& td);

/// Re-validates the output decomposition against the formula's primal graph
/// and re-checks the width bound for every node.
bool verify_guided(const DgReductionOutput& output, std::vector<std::string>* problems = nullptr);

}  // namespace tw
