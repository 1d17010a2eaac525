#include "ted/monotone_matrix.hpp"

#include <bit>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ted {

namespace {
int ceil_pow2(int n) { return static_cast<int>(std::bit_ceil(static_cast<unsigned>(std::max(n, 1)))); }

/// Fixed-size node allocator. Each thread recycles through its own free
/// list; the backing chunks live until program exit because a node freed
/// on one thread may have been carved from another thread's chunk.
template <typename T>
class NodePool {
 public:
  static T* allocate() {
    Local& local = local_state();
    if (local.free == nullptr) refill(local);
    Slot* s = local.free;
    local.free = s->next;
    return reinterpret_cast<T*>(s);
  }
  static void deallocate(T* p) noexcept {
    Local& local = local_state();
    Slot* s = reinterpret_cast<Slot*>(p);
    s->next = local.free;
    local.free = s;
  }

 private:
  union Slot {
    Slot* next;
    alignas(T) unsigned char storage[sizeof(T)];
  };
  struct Local {
    Slot* free = nullptr;
  };
  struct Chunks {
    std::mutex mu;
    std::vector<std::unique_ptr<Slot[]>> blocks;
  };
  static constexpr std::size_t kChunk = 4096;

  static Local& local_state() {
    thread_local Local local;
    return local;
  }
  static Chunks& chunks() {
    static Chunks c;
    return c;
  }
  static void refill(Local& local) {
    auto block = std::make_unique<Slot[]>(kChunk);
    for (std::size_t i = 0; i + 1 < kChunk; ++i) block[i].next = &block[i + 1];
    block[kChunk - 1].next = local.free;
    local.free = &block[0];
    Chunks& c = chunks();
    const std::lock_guard<std::mutex> lock(c.mu);
    c.blocks.push_back(std::move(block));
  }
};

}  // namespace

MonotoneMatrix::Storage::Storage(const Storage& other)
    : rows(other.rows), cols(other.cols), P(other.P), Q(other.Q), corners(other.corners),
      roots(other.roots) {
  for (Node* n : roots) retain(n);
}

MonotoneMatrix::Storage::~Storage() {
  for (Node* n : roots) release(n);
}

MonotoneMatrix::Node* MonotoneMatrix::make_node(Value mx, Node* left, Node* right) {
  Node* n = NodePool<Node>::allocate();
  n->mx = mx;
  n->rc = 1;
  n->ch[0] = left;
  n->ch[1] = right;
  return n;
}

void MonotoneMatrix::release(Node* n) noexcept {
  // Inner trees are at most log2(cols) + 1 levels deep.
  if (n == nullptr || --n->rc > 0) return;
  release(n->ch[0]);
  release(n->ch[1]);
  NodePool<Node>::deallocate(n);
}

void MonotoneMatrix::inner_insert(Node*& root, int Q, int col0, Value x) {
  Node** slot = &root;
  int lo = 0;
  int hi = Q;
  for (;;) {
    Node* n = *slot;
    if (n == nullptr) {
      n = make_node(x, nullptr, nullptr);
      *slot = n;
    } else if (n->rc > 1) {
      Node* copy = make_node(std::max(n->mx, x), n->ch[0], n->ch[1]);
      retain(copy->ch[0]);
      retain(copy->ch[1]);
      --n->rc;
      *slot = copy;
      n = copy;
    } else {
      n->mx = std::max(n->mx, x);
    }
    if (hi - lo == 1) return;
    const int mid = (lo + hi) / 2;
    if (col0 < mid) {
      slot = &n->ch[0];
      hi = mid;
    } else {
      slot = &n->ch[1];
      lo = mid;
    }
  }
}

Value MonotoneMatrix::inner_prefix(const Node* n, int Q, int col0) noexcept {
  Value res = kNegInf;
  int lo = 0;
  int hi = Q;
  while (n != nullptr) {
    if (hi - 1 <= col0) return std::max(res, n->mx);
    const int mid = (lo + hi) / 2;
    if (col0 < mid) {
      n = n->ch[0];
      hi = mid;
    } else {
      if (n->ch[0] != nullptr) res = std::max(res, n->ch[0]->mx);
      n = n->ch[1];
      lo = mid;
    }
  }
  return res;
}

int MonotoneMatrix::inner_leftmost(const Node* n, int Q, Value x) noexcept {
  if (n == nullptr || n->mx < x) return -1;
  int lo = 0;
  int hi = Q;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    const Node* left = n->ch[0];
    if (left != nullptr && left->mx >= x) {
      n = left;
      hi = mid;
    } else {
      n = n->ch[1];
      lo = mid;
    }
  }
  return lo;
}

MonotoneMatrix MonotoneMatrix::new_neg_inf(int rows, int cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("MonotoneMatrix dimensions must be positive");
  }
  MonotoneMatrix m;
  m.store_ = std::make_shared<Storage>();
  m.store_->rows = rows;
  m.store_->cols = cols;
  m.store_->P = ceil_pow2(rows);
  m.store_->Q = ceil_pow2(cols);
  m.store_->roots.assign(static_cast<std::size_t>(2 * m.store_->P), nullptr);
  return m;
}

void MonotoneMatrix::check_row(int i) const {
  if (!store_ || i < 1 || i > store_->rows) {
    throw std::out_of_range("MonotoneMatrix row " + std::to_string(i) + " out of range");
  }
}

void MonotoneMatrix::check_col(int j) const {
  if (!store_ || j < 1 || j > store_->cols) {
    throw std::out_of_range("MonotoneMatrix column " + std::to_string(j) + " out of range");
  }
}

void MonotoneMatrix::make_unique() {
  if (store_.use_count() > 1) store_ = std::make_shared<Storage>(*store_);
}

Value MonotoneMatrix::get(int i, int j) const {
  check_row(i);
  check_col(j);
  return get_unchecked(i, j);
}

Value MonotoneMatrix::get_unchecked(int i, int j) const noexcept {
  const auto& s = *store_;
  Value res = kNegInf;
  for (int l = s.P + i - 1, r = 2 * s.P; l < r; l >>= 1, r >>= 1) {
    if ((l & 1) != 0) res = std::max(res, inner_prefix(s.roots[l++], s.Q, j - 1));
    if ((r & 1) != 0) res = std::max(res, inner_prefix(s.roots[--r], s.Q, j - 1));
  }
  return res;
}

int MonotoneMatrix::mincol(int i, Value x) const {
  check_row(i);
  if (x == kNegInf) return 1;
  const auto& s = *store_;
  int best = -1;
  for (int l = s.P + i - 1, r = 2 * s.P; l < r; l >>= 1, r >>= 1) {
    if ((l & 1) != 0) {
      const int c = inner_leftmost(s.roots[l++], s.Q, x);
      if (c >= 0 && (best < 0 || c < best)) best = c;
    }
    if ((r & 1) != 0) {
      const int c = inner_leftmost(s.roots[--r], s.Q, x);
      if (c >= 0 && (best < 0 || c < best)) best = c;
    }
  }
  return best < 0 ? 1 : best + 1;
}

int MonotoneMatrix::maxrow(int j, Value x) const { return maxrow_value(j, x).first; }

std::pair<int, Value> MonotoneMatrix::maxrow_value(int j, Value x) const {
  check_col(j);
  const auto& s = *store_;
  if (x == kNegInf) return {s.rows, get_unchecked(s.rows, j)};
  const Value top = inner_prefix(s.roots[1], s.Q, j - 1);
  if (top < x) return {1, top};
  // Descend towards the lowest row reaching x. Right siblings passed on
  // the way hold rows below the answer: their maxima (all < x) still count
  // towards the entry at the answer row.
  Value below = kNegInf;
  int idx = 1;
  while (idx < s.P) {
    const int right = 2 * idx + 1;
    const Value v = inner_prefix(s.roots[right], s.Q, j - 1);
    if (v >= x) {
      idx = right;
    } else {
      below = std::max(below, v);
      idx = 2 * idx;
    }
  }
  return {idx - s.P + 1, std::max(below, inner_prefix(s.roots[idx], s.Q, j - 1))};
}

void MonotoneMatrix::assign_max(int i, int j, Value x) {
  check_row(i);
  check_col(j);
  if (x == kNegInf || get_unchecked(i, j) >= x) return;
  make_unique();
  auto& s = *store_;
  for (int idx = s.P + i - 1; idx >= 1; idx >>= 1) inner_insert(s.roots[idx], s.Q, j - 1, x);
  ++s.corners;
}

MonotoneMatrix MonotoneMatrix::rangemax(int i, int j, Value x) const {
  MonotoneMatrix out = *this;
  out.assign_max(i, j, x);
  return out;
}

DenseBlock MonotoneMatrix::to_dense() const {
  const int n = rows();
  const int m = cols();
  DenseBlock out(n, m, kNegInf);
  if (!store_) return out;
  const auto& s = *store_;
  // Outer leaves hold exactly the corners inserted at that row.
  std::vector<std::pair<const Node*, int>> stack;
  for (int i = 1; i <= n; ++i) {
    const Node* root = s.roots[s.P + i - 1];
    if (root == nullptr) continue;
    Value* row = out.row(i - 1);
    stack.clear();
    stack.emplace_back(root, s.Q);
    // (node, width) with implicit left offset tracked alongside.
    std::vector<int> offsets{0};
    while (!stack.empty()) {
      auto [node, width] = stack.back();
      stack.pop_back();
      const int lo = offsets.back();
      offsets.pop_back();
      if (width == 1) {
        if (lo < m) row[lo] = std::max(row[lo], node->mx);
        continue;
      }
      const int half = width / 2;
      if (node->ch[0] != nullptr) {
        stack.emplace_back(node->ch[0], half);
        offsets.push_back(lo);
      }
      if (node->ch[1] != nullptr) {
        stack.emplace_back(node->ch[1], half);
        offsets.push_back(lo + half);
      }
    }
  }
  // Dominance closure: propagate up and to the right.
  for (int i = n - 1; i >= 0; --i) {
    Value* row = out.row(i);
    const Value* below = i + 1 < n ? out.row(i + 1) : nullptr;
    for (int j = 0; j < m; ++j) {
      Value v = row[j];
      if (below != nullptr) v = std::max(v, below[j]);
      if (j > 0) v = std::max(v, row[j - 1]);
      row[j] = v;
    }
  }
  return out;
}

MonotoneMatrix MonotoneMatrix::from_dense(const DenseBlock& dense) {
  const int n = dense.rows();
  const int m = dense.cols();
  MonotoneMatrix out = new_neg_inf(n, m);
  auto& s = *out.store_;
  for (int i = n - 1; i >= 0; --i) {
    for (int j = 0; j < m; ++j) {
      const Value v = dense.at(i, j);
      if (v == kNegInf) continue;
      const Value below = i + 1 < n ? dense.at(i + 1, j) : kNegInf;
      const Value left = j > 0 ? dense.at(i, j - 1) : kNegInf;
      if (v > std::max(below, left)) {
        for (int idx = s.P + i; idx >= 1; idx >>= 1) inner_insert(s.roots[idx], s.Q, j, v);
        ++s.corners;
      }
    }
  }
  return out;
}

}  // namespace ted
