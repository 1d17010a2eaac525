#include "ted/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>

namespace ted {

int brute_force_cap() {
  if (const char* env = std::getenv("TED_ORACLE_CAP")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0) return cap;
    } catch (const std::exception&) {
      // fall through to the default on malformed values
    }
  }
  return 16;
}

namespace {

/// Postorder view of a tree with the forest hung under a virtual root.
struct PostorderTree {
  std::vector<int> label;     // label id per postorder index (0-based); virtual root = -1
  std::vector<int> leftmost;  // postorder index of leftmost leaf descendant
  std::vector<int> keyroots;

  explicit PostorderTree(const Forest& f) {
    const int n = f.size();
    label.reserve(static_cast<std::size_t>(n) + 1);
    leftmost.reserve(static_cast<std::size_t>(n) + 1);
    // Iterative postorder from the virtual root (node 0).
    std::vector<std::pair<NodeId, std::size_t>> stack{{kVirtualRoot, 0}};
    std::vector<int> first_leaf(static_cast<std::size_t>(n) + 1, -1);
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      const auto& ch = f.children(u);
      if (next < ch.size()) {
        stack.emplace_back(ch[next++], 0);
        continue;
      }
      const int idx = static_cast<int>(label.size());
      label.push_back(u == kVirtualRoot ? -1 : f.label(u).id);
      leftmost.push_back(ch.empty() ? idx : first_leaf[ch.front()]);
      first_leaf[u] = leftmost.back();
      stack.pop_back();
    }
    // Keyroots: nodes with no later node sharing their leftmost leaf.
    std::vector<char> taken(label.size(), 0);
    for (int i = static_cast<int>(label.size()) - 1; i >= 0; --i) {
      if (taken[static_cast<std::size_t>(leftmost[i])] == 0) {
        keyroots.push_back(i);
        taken[static_cast<std::size_t>(leftmost[i])] = 1;
      }
    }
    std::sort(keyroots.begin(), keyroots.end());
  }
  [[nodiscard]] int size() const { return static_cast<int>(label.size()); }
};

}  // namespace

int zhang_shasha_ed(const Forest& f1, const Forest& f2) {
  const PostorderTree a(f1);
  const PostorderTree b(f2);
  const int n = a.size();
  const int m = b.size();
  std::vector<int> td(static_cast<std::size_t>(n) * m, 0);
  std::vector<int> fd(static_cast<std::size_t>(n + 1) * (m + 1), 0);
  auto TD = [&](int i, int j) -> int& { return td[static_cast<std::size_t>(i) * m + j]; };

  for (int kr1 : a.keyroots) {
    for (int kr2 : b.keyroots) {
      const int l1 = a.leftmost[kr1];
      const int l2 = b.leftmost[kr2];
      const int rows = kr1 - l1 + 2;
      const int cols = kr2 - l2 + 2;
      auto FD = [&](int i, int j) -> int& { return fd[static_cast<std::size_t>(i) * cols + j]; };
      FD(0, 0) = 0;
      for (int i = 1; i < rows; ++i) FD(i, 0) = FD(i - 1, 0) + 1;
      for (int j = 1; j < cols; ++j) FD(0, j) = FD(0, j - 1) + 1;
      for (int i = 1; i < rows; ++i) {
        const int x = l1 + i - 1;
        for (int j = 1; j < cols; ++j) {
          const int y = l2 + j - 1;
          const int del = FD(i - 1, j) + 1;
          const int ins = FD(i, j - 1) + 1;
          if (a.leftmost[x] == l1 && b.leftmost[y] == l2) {
            const int rel = FD(i - 1, j - 1) + (a.label[x] == b.label[y] ? 0 : 1);
            FD(i, j) = std::min({del, ins, rel});
            TD(x, y) = FD(i, j);
          } else {
            const int pi = a.leftmost[x] - l1;
            const int pj = b.leftmost[y] - l2;
            FD(i, j) = std::min({del, ins, FD(pi, pj) + TD(x, y)});
          }
        }
      }
    }
  }
  return TD(n - 1, m - 1);
}

namespace {

/// Exhaustive search over mappings. Nodes of F1 are visited in preorder and
/// partners in F2 are chosen in increasing preorder; with that ordering a
/// new pair is consistent with an earlier one iff ancestry agrees.
class MappingSearch {
 public:
  MappingSearch(const Forest& f1, const Forest& f2) : f1_(f1), f2_(f2) {
    n1_ = f1.size();
    n2_ = f2.size();
  }

  int run() {
    chosen_.clear();
    best_pairs_.clear();
    best_ = 0;
    dfs(1, 0, 0);
    return best_;
  }
  [[nodiscard]] const std::vector<std::pair<NodeId, NodeId>>& best_pairs() const {
    return best_pairs_;
  }

 private:
  void dfs(NodeId u, NodeId last_v, int weight) {
    if (weight > best_) {
      best_ = weight;
      best_pairs_ = chosen_;
    }
    if (u > n1_) return;
    const int bound = weight + 2 * std::min(n1_ - u + 1, n2_ - last_v);
    if (bound <= best_) return;
    for (NodeId v = last_v + 1; v <= n2_; ++v) {
      if (!consistent(u, v)) continue;
      chosen_.emplace_back(u, v);
      dfs(u + 1, v, weight + pair_weight(f1_.label(u), f2_.label(v)));
      chosen_.pop_back();
      if (weight + 2 * std::min(n1_ - u + 1, n2_ - v) <= best_) break;
    }
    dfs(u + 1, last_v, weight);
  }

  [[nodiscard]] bool consistent(NodeId u, NodeId v) const {
    for (const auto& [pu, pv] : chosen_) {
      if (f1_.is_ancestor(pu, u) != f2_.is_ancestor(pv, v)) return false;
    }
    return true;
  }

  const Forest& f1_;
  const Forest& f2_;
  int n1_ = 0;
  int n2_ = 0;
  int best_ = 0;
  std::vector<std::pair<NodeId, NodeId>> chosen_;
  std::vector<std::pair<NodeId, NodeId>> best_pairs_;
};

void check_cap(const Forest& f1, const Forest& f2, int cap) {
  if (f1.size() + f2.size() > cap) {
    throw OracleCapExceeded("brute force refused: |F1| + |F2| = " +
                            std::to_string(f1.size() + f2.size()) + " exceeds cap " +
                            std::to_string(cap));
  }
}

}  // namespace

int brute_force_sim(const Forest& f1, const Forest& f2, int cap) {
  check_cap(f1, f2, cap);
  return MappingSearch(f1, f2).run();
}

std::vector<std::pair<NodeId, NodeId>> brute_force_mapping(const Forest& f1, const Forest& f2,
                                                           int cap) {
  check_cap(f1, f2, cap);
  MappingSearch search(f1, f2);
  search.run();
  return search.best_pairs();
}

bool is_valid_mapping(const Forest& f1, const Forest& f2,
                      const std::vector<std::pair<NodeId, NodeId>>& pairs) {
  std::vector<char> used1(static_cast<std::size_t>(f1.size()) + 1, 0);
  std::vector<char> used2(static_cast<std::size_t>(f2.size()) + 1, 0);
  for (const auto& [u, v] : pairs) {
    if (u < 1 || u > f1.size() || v < 1 || v > f2.size()) return false;
    if (used1[u] != 0 || used2[v] != 0) return false;
    used1[u] = used2[v] = 1;
  }
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    for (std::size_t b = 0; b < pairs.size(); ++b) {
      if (a == b) continue;
      const auto [u1, v1] = pairs[a];
      const auto [u2, v2] = pairs[b];
      if (f1.is_ancestor(u1, u2) != f2.is_ancestor(v1, v2)) return false;
      // In preorder, u1 < u2 without ancestry means u1 lies to the left.
      const bool left1 = u1 < u2 && !f1.is_ancestor(u1, u2);
      const bool left2 = v1 < v2 && !f2.is_ancestor(v1, v2);
      if (left1 != left2) return false;
    }
  }
  return true;
}

int sim_ed_convert(int value, int n1, int n2) {
  if (n1 < 0 || n2 < 0 || value < 0 || value > n1 + n2) {
    throw std::out_of_range("sim_ed_convert: value " + std::to_string(value) +
                            " outside [0, " + std::to_string(n1 + n2) + "]");
  }
  return n1 + n2 - value;
}

DenseBlock similarity_matrix_naive(const Forest& f, const Forest& t2, int cap) {
  if (t2.size() > cap) {
    throw OracleCapExceeded("naive similarity matrix refused: |T2| = " +
                            std::to_string(t2.size()) + " exceeds cap " + std::to_string(cap));
  }
  const BiOrderIndex order = bi_order(t2);
  const int n = order.dimension();
  DenseBlock out(n, n, kNegInf);
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      const Forest part = subforest(t2, order, SubforestRef{i, j});
      const int ed = zhang_shasha_ed(f, part);
      out.at(i - 1, j - 1) = sim_ed_convert(ed, f.size(), part.size());
    }
  }
  return out;
}

DenseBlock restricted_matrix_naive(const Forest& tree, const Forest& t2, int cap) {
  if (tree.roots().size() != 1) {
    throw std::invalid_argument("restricted_matrix_naive: first argument must be a tree");
  }
  if (t2.size() > cap) {
    throw OracleCapExceeded("naive restricted matrix refused: |T2| = " +
                            std::to_string(t2.size()) + " exceeds cap " + std::to_string(cap));
  }
  const NodeId root = tree.roots().front();
  const Forest below = remove_node(tree, root);
  const BiOrderIndex order = bi_order(t2);
  const int n = order.dimension();
  // Best value per node v of T2 with root(T) mapped to v.
  std::vector<Value> at_node(static_cast<std::size_t>(t2.size()) + 1, kNegInf);
  for (NodeId v = 1; v <= t2.size(); ++v) {
    const Forest inner = subforest(t2, order, SubforestRef{order.l[v] + 1, order.r[v] - 1});
    const int sim = sim_ed_convert(zhang_shasha_ed(below, inner), below.size(), inner.size());
    at_node[v] = sim + pair_weight(tree.label(root), t2.label(v));
  }
  DenseBlock out(n, n, kNegInf);
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      Value best = kNegInf;
      for (NodeId v = 1; v <= t2.size(); ++v) {
        if (i <= order.l[v] && order.r[v] <= j) best = std::max(best, at_node[v]);
      }
      out.at(i - 1, j - 1) = best;
    }
  }
  return out;
}

}  // namespace ted
