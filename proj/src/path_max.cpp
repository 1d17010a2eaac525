#include "ted/path_max.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace ted {

PathMaxTree::PathMaxTree(const Forest& tree) : n_(tree.size()) {
  const auto count = static_cast<std::size_t>(n_) + 1;
  parent_.assign(count, kVirtualRoot);
  depth_.assign(count, 0);
  head_.assign(count, kVirtualRoot);
  pos_.assign(count, -1);
  std::vector<NodeId> heavy(count, kVirtualRoot);
  for (NodeId v = 1; v <= n_; ++v) {
    parent_[v] = tree.parent(v);
    depth_[v] = tree.depth(v);
    int best = 0;
    for (NodeId c : tree.children(v)) {
      if (tree.subtree_size(c) > best) {
        best = tree.subtree_size(c);
        heavy[v] = c;
      }
    }
  }
  // Lay out each heavy chain contiguously, chain heads first in preorder.
  int next = 0;
  for (NodeId v = 1; v <= n_; ++v) {
    if (parent_[v] != kVirtualRoot && heavy[parent_[v]] == v) continue;
    for (NodeId w = v; w != kVirtualRoot; w = heavy[w]) {
      head_[w] = v;
      pos_[w] = next++;
    }
  }
  size_ = static_cast<int>(std::bit_ceil(static_cast<unsigned>(std::max(n_, 1))));
  tag_.assign(static_cast<std::size_t>(2 * size_), kNegInf);
}

void PathMaxTree::chmax_range(int lo, int hi, Value value) {
  ++range_ops_;
  for (int l = lo + size_, r = hi + size_ + 1; l < r; l >>= 1, r >>= 1) {
    if ((l & 1) != 0) {
      tag_[l] = std::max(tag_[l], value);
      ++l;
    }
    if ((r & 1) != 0) {
      --r;
      tag_[r] = std::max(tag_[r], value);
    }
  }
}

void PathMaxTree::chmax_to_ancestor(NodeId a, NodeId stop, Value value) {
  // Updates a and its ancestors strictly below `stop` (stop is an ancestor
  // of a or the virtual root).
  while (a != stop) {
    const NodeId h = head_[a];
    if (depth_[h] > depth_[stop]) {
      chmax_range(pos_[h], pos_[a], value);
      a = parent_[h];
    } else {
      chmax_range(pos_[stop] + 1, pos_[a], value);
      return;
    }
  }
}

void PathMaxTree::path_update(NodeId from, const std::vector<PathSegment>& segments) {
  if (from < 1 || from > n_) throw std::out_of_range("path_update: node out of range");
  if (segments.empty() || segments.front().bottom != from) {
    throw std::invalid_argument("path_update: first segment must start at the update node");
  }
  for (std::size_t s = 1; s < segments.size(); ++s) {
    const NodeId lower = segments[s - 1].bottom;
    const NodeId upper = segments[s].bottom;
    // Proper ancestor check via the chain structure: climb from lower.
    bool found = false;
    if (upper >= 1 && upper <= n_ && depth_[upper] < depth_[lower]) {
      NodeId a = lower;
      while (a != kVirtualRoot && depth_[head_[a]] > depth_[upper]) a = parent_[head_[a]];
      found = a != kVirtualRoot && head_[a] == head_[upper] && pos_[upper] <= pos_[a];
    }
    if (!found) {
      throw std::invalid_argument("path_update: segment bottom " + std::to_string(upper) +
                                  " is not a proper ancestor of " + std::to_string(lower));
    }
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const NodeId stop = s + 1 < segments.size() ? segments[s + 1].bottom : kVirtualRoot;
    if (segments[s].value == kNegInf) continue;
    chmax_to_ancestor(segments[s].bottom, stop, segments[s].value);
  }
}

Value PathMaxTree::query(NodeId v) const {
  if (v < 1 || v > n_) throw std::out_of_range("PathMaxTree::query: node out of range");
  Value res = kNegInf;
  for (int idx = pos_[v] + size_; idx >= 1; idx >>= 1) res = std::max(res, tag_[idx]);
  return res;
}

void PathMaxTree::reset() { std::fill(tag_.begin(), tag_.end(), kNegInf); }

}  // namespace ted
