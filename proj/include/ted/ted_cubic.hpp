#pragma once

#include <cstdint>
#include <vector>

#include "ted/forest.hpp"
#include "ted/maxplus.hpp"
#include "ted/monotone_matrix.hpp"

namespace ted {

/// The second tree T2 together with everything algorithms look up per node:
/// bi-order positions, parents and a binary-lifting ancestor table.
///
/// Matrices derived from a Target share storage with its cached S(empty),
/// so a Target and its matrices follow the MonotoneMatrix concurrency
/// contract: one writing thread at a time.
class Target {
 public:
  explicit Target(Forest t2);

  [[nodiscard]] const Forest& forest() const noexcept { return t2_; }
  [[nodiscard]] const BiOrderIndex& order() const noexcept { return order_; }
  [[nodiscard]] int size() const noexcept { return t2_.size(); }
  /// N = 2|T2| + 1.
  [[nodiscard]] int dimension() const noexcept { return order_.dimension(); }
  [[nodiscard]] int l(NodeId v) const { return order_.l[v]; }
  [[nodiscard]] int r(NodeId v) const { return order_.r[v]; }
  [[nodiscard]] Label label(NodeId v) const { return t2_.label(v); }
  [[nodiscard]] NodeId parent(NodeId v) const { return t2_.parent(v); }

  /// S(empty) as a matrix: zero on and above the diagonal, -inf below.
  [[nodiscard]] const MonotoneMatrix& empty_matrix() const noexcept { return empty_; }
  /// Deepest proper ancestor a of v with l(a) <= bound; kVirtualRoot if none.
  [[nodiscard]] NodeId deepest_ancestor_l_at_most(NodeId v, int bound) const;
  /// Deepest proper ancestor a of v with r(a) >= bound; kVirtualRoot if none.
  [[nodiscard]] NodeId deepest_ancestor_r_at_least(NodeId v, int bound) const;

 private:
  Forest t2_;
  BiOrderIndex order_;
  std::vector<std::vector<NodeId>> up_;  // up_[j][v] = 2^j-th ancestor (0 past the top)
  MonotoneMatrix empty_;
};

/// S(F) against a Target: s_ij = sim(F, T2[i, j)) for i <= j, -inf below.
struct SimMatrix {
  MonotoneMatrix mat;
  int forest_size = 0;

  /// 2 min(|F|, |T2|): every entry is at most this.
  [[nodiscard]] int bound(const Target& t) const noexcept {
    return 2 * std::min(forest_size, t.size());
  }
};

struct CubicStats {
  std::int64_t materialized = 0;  // matrices of sub(u) and sub(u, [1, k]), k >= 2
  std::int64_t root_attaches = 0;
  std::int64_t mul1_calls = 0;
  std::int64_t pair_count = 0;    // sum of |F1| |F2| over mul1 calls
  Mul1Stats mul1;

  CubicStats& operator+=(const CubicStats& o) {
    materialized += o.materialized;
    root_attaches += o.root_attaches;
    mul1_calls += o.mul1_calls;
    pair_count += o.pair_count;
    mul1.iterations += o.mul1.iterations;
    mul1.rangemax_calls += o.mul1.rangemax_calls;
    return *this;
  }
};

/// S(empty): zero on and above the diagonal.
SimMatrix empty_sim(const Target& t);

/// S(F) for a tree F rooted at a node labeled `root_label`, given
/// S(F - root). Reads come from the unmodified child snapshot.
SimMatrix root_attach(const SimMatrix& child, Label root_label, const Target& t,
                      CubicStats* stats = nullptr);

/// S(F1 + F2) = S(F1) * S(F2) by mul1.
SimMatrix concat_sim(const SimMatrix& a, const SimMatrix& b, const Target& t,
                     CubicStats* stats = nullptr);

/// S(sub(u)) for a node of F.
SimMatrix dp_subtree(const Forest& f, NodeId u, const Target& t, CubicStats* stats = nullptr);
/// S(sub(vroot, [x, y])) without materializing the slice.
SimMatrix dp_sync(const Forest& f, SyncSubforest s, const Target& t, CubicStats* stats = nullptr);
/// S(F) for a whole forest.
SimMatrix dp_similarity(const Forest& f, const Target& t, CubicStats* stats = nullptr);

/// S(G_l) for G_l = parts[0] + ... + parts[l-1], l = 1..size.
std::vector<SimMatrix> prefix_similarities(const std::vector<Forest>& parts, const Target& t,
                                           CubicStats* stats = nullptr);
/// S(H_l) for H_l = parts[l] + ... + parts[size-1], l = 0..size-1.
std::vector<SimMatrix> suffix_similarities(const std::vector<Forest>& parts, const Target& t,
                                           CubicStats* stats = nullptr);

/// Edit distance via S(F1) with the larger forest as F1.
int ted_cubic(const Forest& f1, const Forest& f2, CubicStats* stats = nullptr);

}  // namespace ted
