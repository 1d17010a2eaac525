#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ted {

/// Dense node index. Real nodes are numbered 1..|F| in preorder, which is
/// also the order of first occurrence in the bi-order sequence.
using NodeId = std::int32_t;

/// Sentinel parent of every top-level root. Never labeled, never mapped.
inline constexpr NodeId kVirtualRoot = 0;

struct Label {
  std::int32_t id = 0;
  friend constexpr bool operator==(Label, Label) = default;
};

/// 1 when the symbols differ, 0 when they agree.
constexpr int relabel_cost(Label a, Label b) noexcept { return a == b ? 0 : 1; }

/// Weight a mapped pair contributes to similarity (2 on a match, 1 otherwise).
constexpr int pair_weight(Label a, Label b) noexcept { return 2 - relabel_cost(a, b); }

/// Interns label strings to dense ids. One table is shared by all forests of
/// a run so that equal strings compare equal across forests.
class LabelTable {
 public:
  Label intern(std::string_view name);
  [[nodiscard]] const std::string& name(Label label) const;
  [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }

  /// Interns "a".."z","aa",... for ids 0..count-1 and returns the table.
  static LabelTable alphabetic(int count);

 private:
  std::unordered_map<std::string, std::int32_t> ids_;
  std::vector<std::string> names_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  [[nodiscard]] std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Rooted ordered labeled forest. Immutable after construction.
///
/// Nodes live in an arena indexed 1..size() in preorder; index 0 stands for
/// the virtual root whose children are the top-level roots.
class Forest {
 public:
  Forest();

  /// Builds a forest from an arbitrary temporary numbering. `children[t]`
  /// lists the ordered children of temporary node t, `roots` the top-level
  /// roots. Nodes are renumbered into preorder.
  static Forest from_children(const std::vector<Label>& labels,
                              const std::vector<std::vector<std::int32_t>>& children,
                              const std::vector<std::int32_t>& roots);

  [[nodiscard]] int size() const noexcept { return static_cast<int>(label_.size()) - 1; }
  [[nodiscard]] bool empty() const noexcept { return size() == 0; }

  [[nodiscard]] Label label(NodeId u) const { return label_.at(u); }
  [[nodiscard]] NodeId parent(NodeId u) const { return parent_.at(u); }
  /// Children of u in order; u may be kVirtualRoot.
  [[nodiscard]] const std::vector<NodeId>& children(NodeId u) const { return children_.at(u); }
  [[nodiscard]] int degree(NodeId u) const { return static_cast<int>(children_.at(u).size()); }
  /// k-th child (1-based) of u.
  [[nodiscard]] NodeId child(NodeId u, int k) const { return children_.at(u).at(k - 1); }
  /// Position (1-based) of u among its siblings.
  [[nodiscard]] int child_rank(NodeId u) const { return rank_.at(u); }
  [[nodiscard]] int subtree_size(NodeId u) const { return size_.at(u); }
  [[nodiscard]] int depth(NodeId u) const { return depth_.at(u); }
  [[nodiscard]] const std::vector<NodeId>& roots() const { return children_[kVirtualRoot]; }

  /// |sub(u, [x, y])|, the total size of children x..y of u (1-based,
  /// inclusive). Returns 0 when x > y.
  [[nodiscard]] int children_size(NodeId u, int x, int y) const;

  /// True when a is a proper ancestor of b (the virtual root is an ancestor
  /// of every real node).
  [[nodiscard]] bool is_ancestor(NodeId a, NodeId b) const;

  friend bool operator==(const Forest& a, const Forest& b) {
    return a.label_ == b.label_ && a.parent_ == b.parent_ && a.children_ == b.children_;
  }

 private:
  void finalize();

  std::vector<Label> label_;                  // index 0 unused
  std::vector<NodeId> parent_;                // parent_[0] = -1
  std::vector<std::vector<NodeId>> children_;
  std::vector<int> rank_;
  std::vector<int> size_;
  std::vector<int> depth_;                    // top-level roots have depth 1
  std::vector<std::vector<int>> child_prefix_;  // child_prefix_[u][k] = |sub(u,[1,k])|
};

/// Bi-order traversal: each node recorded on entry and on exit.
/// Positions are 1-based; `seq[p - 1]` is the node at position p.
struct BiOrderIndex {
  std::vector<NodeId> seq;  // length 2|F|
  std::vector<int> l;       // first occurrence; l[0] = 0
  std::vector<int> r;       // second occurrence + 1; r[0] = 2|F| + 1

  /// Matrix dimension 2|F| + 1 used by similarity matrices over this forest.
  [[nodiscard]] int dimension() const noexcept { return static_cast<int>(seq.size()) + 1; }
};

/// F[l, r): the nodes whose both occurrences fall inside [l, r).
struct SubforestRef {
  int l = 1;
  int r = 1;
};

/// sub(vroot, [x, y]): children x..y (1-based, inclusive) of vroot.
struct SyncSubforest {
  NodeId vroot = kVirtualRoot;
  int x = 1;
  int y = 0;
  [[nodiscard]] bool empty() const noexcept { return x > y; }
  friend bool operator==(const SyncSubforest&, const SyncSubforest&) = default;
};

Forest parse_forest(std::string_view text, LabelTable& labels);
std::string serialize_forest(const Forest& forest, const LabelTable& labels);

BiOrderIndex bi_order(const Forest& forest);

/// Node ids of F[l, r) in increasing order.
std::vector<NodeId> subforest_nodes(const Forest& forest, const BiOrderIndex& order,
                                    SubforestRef ref);

/// Materializes F[l, r) as a fresh forest (nodes keep their relative order;
/// each node hangs under its nearest surviving ancestor).
Forest subforest(const Forest& forest, const BiOrderIndex& order, SubforestRef ref);

/// Materializes sub(vroot, [x, y]) as a fresh forest.
Forest sync_slice(const Forest& forest, SyncSubforest s);

/// The whole forest as a synchronous subforest of itself.
SyncSubforest whole(const Forest& forest);

/// F − u for a node u: u is removed and its children take its place.
Forest remove_node(const Forest& forest, NodeId u);

/// F1 + F2.
Forest concatenate(const Forest& a, const Forest& b);

/// Random ordered tree of n nodes: node k picks a uniformly random earlier
/// node as parent and a uniformly random slot among its children. Labels
/// are uniform over ids 0..alphabet-1.
Forest random_forest(int n, int alphabet, std::uint64_t seed);

}  // namespace ted
