#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "ted/dense_block.hpp"
#include "ted/value.hpp"

namespace ted {

/// Persistent row-monotone, column-monotone matrix (1-based indices).
///
/// The matrix is the dominance closure of a set of corner points: entry
/// (i, j) is the maximum x over corners (i', j', x) with i' >= i and j' <= j.
/// rangemax(i', j', x) adds one corner. Storage is a segment tree over rows
/// whose nodes hold sparse segment trees over columns; inner nodes are
/// shared between snapshots and path-copied on write, so a copy is O(rows)
/// and every update or query is O(log rows * log cols).
///
/// Concurrency: any number of threads may read snapshots concurrently.
/// Writes (including copying a handle that is then written) must be
/// serialized per lineage, because node reference counts are not atomic.
class MonotoneMatrix {
 public:
  MonotoneMatrix() = default;

  /// n x m matrix of -inf.
  static MonotoneMatrix new_neg_inf(int rows, int cols);
  /// Exact representation of a dense row/column-monotone block (0-based
  /// block, 1-based matrix). Monotonicity is the caller's contract.
  static MonotoneMatrix from_dense(const DenseBlock& dense);

  [[nodiscard]] int rows() const noexcept { return store_ ? store_->rows : 0; }
  [[nodiscard]] int cols() const noexcept { return store_ ? store_->cols : 0; }

  [[nodiscard]] Value get(int i, int j) const;

  /// Smallest j with get(i, j) >= x; 1 when no such j exists (verify with get).
  [[nodiscard]] int mincol(int i, Value x) const;
  /// Largest i with get(i, j) >= x; 1 when no such i exists (verify with get).
  /// For x = -inf returns rows().
  [[nodiscard]] int maxrow(int j, Value x) const;
  /// maxrow(j, x) together with get(maxrow(j, x), j), in one descent.
  [[nodiscard]] std::pair<int, Value> maxrow_value(int j, Value x) const;

  /// New snapshot with b_ij = max(a_ij, x) for i <= i', j >= j'.
  [[nodiscard]] MonotoneMatrix rangemax(int i, int j, Value x) const;
  /// In-place form of rangemax; other snapshots sharing storage are untouched.
  void assign_max(int i, int j, Value x);

  [[nodiscard]] DenseBlock to_dense() const;

  /// Number of stored corner insertions that changed the matrix (diagnostic).
  [[nodiscard]] std::int64_t corner_count() const noexcept { return store_ ? store_->corners : 0; }

 private:
  struct Node {
    Value mx;
    std::uint32_t rc;
    Node* ch[2];
  };

  struct Storage {
    int rows = 0;
    int cols = 0;
    int P = 1;  // power of two >= rows
    int Q = 1;  // power of two >= cols
    std::int64_t corners = 0;
    std::vector<Node*> roots;  // heap-indexed outer tree, size 2P

    Storage() = default;
    Storage(const Storage& other);
    Storage& operator=(const Storage&) = delete;
    ~Storage();
  };

  static void retain(Node* n) noexcept {
    if (n != nullptr) ++n->rc;
  }
  static Node* make_node(Value mx, Node* left, Node* right);
  static void release(Node* n) noexcept;
  static void inner_insert(Node*& root, int Q, int col0, Value x);
  static Value inner_prefix(const Node* n, int Q, int col0) noexcept;
  static int inner_leftmost(const Node* n, int Q, Value x) noexcept;

  [[nodiscard]] Value get_unchecked(int i, int j) const noexcept;
  void check_row(int i) const;
  void check_col(int j) const;
  void make_unique();

  std::shared_ptr<Storage> store_;
};

}  // namespace ted
