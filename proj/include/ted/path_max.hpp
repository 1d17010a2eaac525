#pragma once

#include <cstdint>
#include <vector>

#include "ted/forest.hpp"
#include "ted/value.hpp"

namespace ted {

/// One run of a root path: every node from `bottom` up to (not including)
/// the next segment's bottom — or to the top of the tree for the last run —
/// receives `value`.
struct PathSegment {
  NodeId bottom = kVirtualRoot;
  Value value = kNegInf;
};

/// Static-tree structure for "max-assign along a node-to-root path, read a
/// single node". Heavy-path decomposition maps every root path to
/// O(log n) contiguous position ranges of a max-tag segment tree.
class PathMaxTree {
 public:
  explicit PathMaxTree(const Forest& tree);

  /// phi(v) <- max(phi(v), value of the segment containing v) for every v on
  /// the path from `from` to its top-level root. Segments must start at
  /// `from` and each following bottom must be a proper ancestor of the
  /// previous one.
  void path_update(NodeId from, const std::vector<PathSegment>& segments);

  [[nodiscard]] Value query(NodeId v) const;

  void reset();

  /// Segment-tree range operations performed so far (cost accounting).
  [[nodiscard]] std::int64_t range_ops() const noexcept { return range_ops_; }

 private:
  void chmax_to_ancestor(NodeId a, NodeId stop, Value value);
  void chmax_range(int lo, int hi, Value value);  // positions [lo, hi], 0-based

  int n_ = 0;
  int size_ = 1;
  std::vector<NodeId> parent_;
  std::vector<int> depth_;
  std::vector<NodeId> head_;
  std::vector<int> pos_;
  std::vector<Value> tag_;
  std::int64_t range_ops_ = 0;
};

}  // namespace ted
