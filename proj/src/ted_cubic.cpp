#include "ted/ted_cubic.hpp"

#include <optional>
#include <stdexcept>
#include <utility>

#include "ted/oracle.hpp"

namespace ted {

Target::Target(Forest t2) : t2_(std::move(t2)), order_(bi_order(t2_)) {
  const int n = t2_.size();
  int levels = 1;
  while ((1 << levels) <= n) ++levels;
  up_.assign(static_cast<std::size_t>(levels), std::vector<NodeId>(static_cast<std::size_t>(n) + 1, 0));
  for (NodeId v = 1; v <= n; ++v) up_[0][v] = t2_.parent(v);
  for (int j = 1; j < levels; ++j) {
    for (NodeId v = 1; v <= n; ++v) up_[j][v] = up_[j - 1][up_[j - 1][v]];
  }
  const int dim = order_.dimension();
  empty_ = MonotoneMatrix::new_neg_inf(dim, dim);
  for (int i = 1; i <= dim; ++i) empty_.assign_max(i, i, 0);
}

NodeId Target::deepest_ancestor_l_at_most(NodeId v, int bound) const {
  NodeId p = t2_.parent(v);
  // l strictly decreases going up, so the qualifying ancestors form a
  // prefix of the path from the top.
  if (p == kVirtualRoot || order_.l[p] <= bound) return p;
  for (int j = static_cast<int>(up_.size()) - 1; j >= 0; --j) {
    const NodeId a = up_[j][p];
    if (a != kVirtualRoot && order_.l[a] > bound) p = a;
  }
  return t2_.parent(p);
}

NodeId Target::deepest_ancestor_r_at_least(NodeId v, int bound) const {
  NodeId p = t2_.parent(v);
  if (p == kVirtualRoot || order_.r[p] >= bound) return p;
  for (int j = static_cast<int>(up_.size()) - 1; j >= 0; --j) {
    const NodeId a = up_[j][p];
    if (a != kVirtualRoot && order_.r[a] < bound) p = a;
  }
  return t2_.parent(p);
}

SimMatrix empty_sim(const Target& t) { return SimMatrix{t.empty_matrix(), 0}; }

SimMatrix root_attach(const SimMatrix& child, Label root_label, const Target& t,
                      CubicStats* stats) {
  SimMatrix out{child.mat, child.forest_size + 1};
  for (NodeId v = 1; v <= t.size(); ++v) {
    const Value inner = child.mat.get(t.l(v) + 1, t.r(v) - 1);
    out.mat.assign_max(t.l(v), t.r(v), sat_add(inner, pair_weight(root_label, t.label(v))));
  }
  if (stats != nullptr) ++stats->root_attaches;
  return out;
}

SimMatrix concat_sim(const SimMatrix& a, const SimMatrix& b, const Target& t, CubicStats* stats) {
  if (a.forest_size == 0) return b;
  if (b.forest_size == 0) return a;
  Mul1Stats local;
  SimMatrix out{mul1(a.mat, b.mat, a.bound(t), b.bound(t), &local),
                a.forest_size + b.forest_size};
  if (stats != nullptr) {
    ++stats->mul1_calls;
    stats->pair_count += static_cast<std::int64_t>(a.forest_size) * b.forest_size;
    stats->mul1.iterations += local.iterations;
    stats->mul1.rangemax_calls += local.rangemax_calls;
  }
  return out;
}

SimMatrix dp_subtree(const Forest& f, NodeId u, const Target& t, CubicStats* stats) {
  if (u < 1 || u > f.size()) throw std::out_of_range("dp_subtree: node out of range");
  const int count = f.subtree_size(u);
  // Preorder: sub(u) occupies ids u .. u + count - 1, children after parents.
  // Visiting in reverse finishes all children before their parent; each
  // child's matrix is dropped as soon as the parent has consumed it.
  std::vector<std::optional<SimMatrix>> done(static_cast<std::size_t>(count));
  for (NodeId w = u + count - 1; w >= u; --w) {
    std::optional<SimMatrix> acc;
    for (NodeId c : f.children(w)) {
      auto& slot = done[static_cast<std::size_t>(c - u)];
      if (!acc) {
        acc = std::move(*slot);
      } else {
        acc = concat_sim(*acc, *slot, t, stats);
        if (stats != nullptr) ++stats->materialized;
      }
      slot.reset();
    }
    SimMatrix below = acc ? std::move(*acc) : empty_sim(t);
    done[static_cast<std::size_t>(w - u)] = root_attach(below, f.label(w), t, stats);
    if (stats != nullptr) ++stats->materialized;
  }
  return std::move(*done[0]);
}

SimMatrix dp_sync(const Forest& f, SyncSubforest s, const Target& t, CubicStats* stats) {
  if (s.vroot < 0 || s.vroot > f.size() || s.x < 1 || s.y > f.degree(s.vroot) ||
      s.x > s.y + 1) {
    throw std::out_of_range("dp_sync: invalid synchronous subforest");
  }
  if (s.empty()) return empty_sim(t);
  std::optional<SimMatrix> acc;
  for (int k = s.x; k <= s.y; ++k) {
    SimMatrix part = dp_subtree(f, f.child(s.vroot, k), t, stats);
    if (!acc) {
      acc = std::move(part);
    } else {
      acc = concat_sim(*acc, part, t, stats);
      if (stats != nullptr) ++stats->materialized;
    }
  }
  return std::move(*acc);
}

SimMatrix dp_similarity(const Forest& f, const Target& t, CubicStats* stats) {
  return dp_sync(f, whole(f), t, stats);
}

std::vector<SimMatrix> prefix_similarities(const std::vector<Forest>& parts, const Target& t,
                                           CubicStats* stats) {
  if (parts.empty()) throw std::invalid_argument("prefix_similarities: no parts");
  std::vector<SimMatrix> out;
  out.reserve(parts.size());
  for (const Forest& p : parts) {
    SimMatrix s = dp_similarity(p, t, stats);
    out.push_back(out.empty() ? std::move(s) : concat_sim(out.back(), s, t, stats));
  }
  return out;
}

std::vector<SimMatrix> suffix_similarities(const std::vector<Forest>& parts, const Target& t,
                                           CubicStats* stats) {
  if (parts.empty()) throw std::invalid_argument("suffix_similarities: no parts");
  std::vector<SimMatrix> out(parts.size());
  for (std::size_t idx = parts.size(); idx-- > 0;) {
    SimMatrix s = dp_similarity(parts[idx], t, stats);
    out[idx] = idx + 1 == parts.size() ? std::move(s) : concat_sim(s, out[idx + 1], t, stats);
  }
  return out;
}

int ted_cubic(const Forest& f1, const Forest& f2, CubicStats* stats) {
  const bool swap = f1.size() < f2.size();
  const Forest& big = swap ? f2 : f1;
  const Forest& small = swap ? f1 : f2;
  const Target t(small);
  const SimMatrix s = dp_similarity(big, t, stats);
  return sim_ed_convert(s.mat.get(1, t.dimension()), big.size(), small.size());
}

}  // namespace ted
