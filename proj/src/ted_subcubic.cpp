#include "ted/ted_subcubic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "ted/oracle.hpp"

namespace ted {

std::string to_string(TransitionKind kind) {
  switch (kind) {
    case TransitionKind::TypeI:
      return "type-I";
    case TransitionKind::TypeIIBase:
      return "type-II-base";
    case TransitionKind::TypeIIFirst:
      return "type-II-first";
    case TransitionKind::TypeIISecond:
      return "type-II-second";
  }
  return "unknown";
}

int DecompositionPlan::count(TransitionKind kind) const {
  return static_cast<int>(
      std::count_if(log.begin(), log.end(), [&](const auto& r) { return r.kind == kind; }));
}

namespace {

int sync_size(const Forest& forest, SyncSubforest s) {
  return forest.children_size(s.vroot, s.x, s.y);
}

int tree_count(SyncSubforest s) { return s.empty() ? 0 : s.y - s.x + 1; }

/// Largest child of u among positions [x, y] (first on ties), as a rank.
int largest_child(const Forest& forest, NodeId u, int x, int y) {
  int best = x;
  for (int c = x + 1; c <= y; ++c) {
    if (forest.subtree_size(forest.child(u, c)) > forest.subtree_size(forest.child(u, best))) {
      best = c;
    }
  }
  return best;
}

}  // namespace

DecompositionStep choose_step(const Forest& forest, SyncSubforest f, int delta) {
  if (delta < 1) throw std::invalid_argument("decomposition: delta must be >= 1");
  if (f.empty()) throw std::invalid_argument("decomposition: empty subforest has no step");
  const NodeId u = f.vroot;
  const int size = sync_size(forest, f);
  DecompositionStep step;
  if (tree_count(f) >= 2) {
    const int l_size = forest.subtree_size(forest.child(u, f.x));
    const int r_size = forest.subtree_size(forest.child(u, f.y));
    if (l_size >= delta && r_size >= delta) {
      step.kind = TransitionKind::TypeI;
      step.left = SyncSubforest{u, f.x, f.x};
      step.rest = SyncSubforest{u, f.x + 1, f.y};
      return step;
    }
  }
  if (size <= 3 * delta) {
    // Empty F' below the leaf at the end of the largest-child path.
    NodeId w = forest.child(u, largest_child(forest, u, f.x, f.y));
    while (forest.degree(w) > 0) w = forest.child(w, largest_child(forest, w, 1, forest.degree(w)));
    step.kind = TransitionKind::TypeIIBase;
    step.source = SyncSubforest{w, 1, 0};
    return step;
  }
  SyncSubforest cur = f;
  for (;;) {
    SyncSubforest next;
    if (tree_count(cur) == 1) {
      const NodeId root = forest.child(cur.vroot, cur.x);
      next = SyncSubforest{root, 1, forest.degree(root)};
    } else {
      const int l_size = forest.subtree_size(forest.child(cur.vroot, cur.x));
      const int r_size = forest.subtree_size(forest.child(cur.vroot, cur.y));
      next = l_size < r_size ? SyncSubforest{cur.vroot, cur.x + 1, cur.y}
                             : SyncSubforest{cur.vroot, cur.x, cur.y - 1};
    }
    if (size - sync_size(forest, next) > 2 * delta) break;
    cur = next;
  }
  bool second = false;
  if (tree_count(cur) >= 2) {
    const int l_size = forest.subtree_size(forest.child(cur.vroot, cur.x));
    const int r_size = forest.subtree_size(forest.child(cur.vroot, cur.y));
    second = l_size >= delta && r_size >= delta;
  }
  step.kind = second ? TransitionKind::TypeIISecond : TransitionKind::TypeIIFirst;
  step.source = cur;
  return step;
}

namespace {

void plan_rec(const Forest& forest, SyncSubforest f, int delta, DecompositionPlan& plan) {
  if (f.empty()) return;
  const DecompositionStep step = choose_step(forest, f, delta);
  const SyncSubforest source = step.kind == TransitionKind::TypeI ? step.left : step.source;
  plan.log.push_back(TransitionRecord{step.kind, f, source, sync_size(forest, f),
                                      sync_size(forest, source)});
  if (step.kind == TransitionKind::TypeI) {
    plan_rec(forest, step.left, delta, plan);
    plan_rec(forest, step.rest, delta, plan);
  } else {
    plan_rec(forest, step.source, delta, plan);
  }
}

}  // namespace

DecompositionPlan plan_decomposition(const Forest& forest, int delta) {
  if (delta < 1) throw std::invalid_argument("decomposition: delta must be >= 1");
  DecompositionPlan plan;
  plan.delta = delta;
  plan_rec(forest, whole(forest), delta, plan);
  return plan;
}

Spine build_spine(const Forest& forest, SyncSubforest f, SyncSubforest f_prime) {
  auto valid = [&](SyncSubforest s) {
    return s.vroot >= 0 && s.vroot <= forest.size() && s.x >= 1 &&
           s.y <= forest.degree(s.vroot) && s.x <= s.y + 1;
  };
  if (!valid(f) || !valid(f_prime)) {
    throw std::invalid_argument("build_spine: invalid synchronous subforest");
  }
  Spine spine;
  spine.f = f;
  spine.f_prime = f_prime;
  const NodeId u0 = f.vroot;
  const NodeId w = f_prime.vroot;
  std::vector<NodeId> path;  // w, par(w), ..., child of u0
  for (NodeId a = w; a != u0; a = forest.parent(a)) {
    if (a == kVirtualRoot) {
      throw std::invalid_argument("build_spine: F' is not below vroot(F)");
    }
    path.push_back(a);
  }
  spine.u.push_back(u0);
  spine.u.insert(spine.u.end(), path.rbegin(), path.rend());
  const int k = spine.k();
  spine.left.assign(static_cast<std::size_t>(k) + 2, SyncSubforest{});
  spine.right.assign(static_cast<std::size_t>(k) + 2, SyncSubforest{});
  if (k == 0) {
    if (f_prime.x < f.x || f_prime.y > f.y) {
      throw std::invalid_argument("build_spine: F' is not inside F's child range");
    }
    spine.left[1] = SyncSubforest{u0, f.x, f_prime.x - 1};
    spine.right[1] = SyncSubforest{u0, f_prime.y + 1, f.y};
  } else {
    const int c1 = forest.child_rank(spine.u[1]);
    if (c1 < f.x || c1 > f.y) {
      throw std::invalid_argument("build_spine: spine leaves F's child range");
    }
    spine.left[1] = SyncSubforest{u0, f.x, c1 - 1};
    spine.right[1] = SyncSubforest{u0, c1 + 1, f.y};
    for (int i = 2; i <= k; ++i) {
      const NodeId p = spine.u[static_cast<std::size_t>(i) - 1];
      const int c = forest.child_rank(spine.u[static_cast<std::size_t>(i)]);
      spine.left[static_cast<std::size_t>(i)] = SyncSubforest{p, 1, c - 1};
      spine.right[static_cast<std::size_t>(i)] = SyncSubforest{p, c + 1, forest.degree(p)};
    }
    spine.left[static_cast<std::size_t>(k) + 1] = SyncSubforest{w, 1, f_prime.x - 1};
    spine.right[static_cast<std::size_t>(k) + 1] = SyncSubforest{w, f_prime.y + 1, forest.degree(w)};
  }
  spine.gap = sync_size(forest, f) - sync_size(forest, f_prime);
  return spine;
}

SpineMatrices::SpineMatrices(const Forest& forest, const Spine& spine, const Target& t,
                             CubicStats* stats)
    : k_(spine.k()) {
  const int top = k_ + 1;
  std::vector<SimMatrix> single_l(static_cast<std::size_t>(top) + 1);
  std::vector<SimMatrix> single_r(static_cast<std::size_t>(top) + 1);
  for (int i = 1; i <= top; ++i) {
    single_l[static_cast<std::size_t>(i)] = dp_sync(forest, spine.left[static_cast<std::size_t>(i)], t, stats);
    single_r[static_cast<std::size_t>(i)] = dp_sync(forest, spine.right[static_cast<std::size_t>(i)], t, stats);
  }
  const SimMatrix empty = empty_sim(t);
  left_.assign(static_cast<std::size_t>(top) + 1, {});
  right_.assign(static_cast<std::size_t>(top) + 1, {});
  for (int i = 1; i <= top; ++i) {
    auto& lrow = left_[static_cast<std::size_t>(i)];
    auto& rrow = right_[static_cast<std::size_t>(i)];
    lrow.push_back(empty);
    rrow.push_back(empty);
    for (int j = i; j <= top; ++j) {
      // l_{i,j} = l_{i,j-1} + l_j and r_{i,j} = r_j + r_{i,j-1}.
      lrow.push_back(concat_sim(lrow.back(), single_l[static_cast<std::size_t>(j)], t, stats));
      rrow.push_back(concat_sim(single_r[static_cast<std::size_t>(j)], rrow.back(), t, stats));
    }
  }
}

const SimMatrix& SpineMatrices::left(int i, int j) const {
  if (i < 1 || i > k_ + 1 || j < i - 1 || j > k_ + 1) {
    throw std::out_of_range("SpineMatrices::left index out of range");
  }
  return left_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - i + 1)];
}

const SimMatrix& SpineMatrices::right(int i, int j) const {
  if (i < 1 || i > k_ + 1 || j < i - 1 || j > k_ + 1) {
    throw std::out_of_range("SpineMatrices::right index out of range");
  }
  return right_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - i + 1)];
}

namespace {

struct Hit {
  int index;
  Value value;
};

/// Distinct answers of mincol(m, row, z) for z = 0..limit with their
/// verified values, stopping at the first absent threshold.
void mincol_hits(const MonotoneMatrix& m, int row, int limit, std::vector<Hit>& out) {
  out.clear();
  for (int z = 0; z <= limit; ++z) {
    const int c = m.mincol(row, z);
    const Value v = m.get(row, c);
    if (v < z) break;
    if (out.empty() || out.back().index != c) out.push_back({c, v});
  }
}

/// Distinct answers of maxrow(m, col, w) for w = 0..limit, as above.
void maxrow_hits(const MonotoneMatrix& m, int col, int limit, std::vector<Hit>& out) {
  out.clear();
  for (int w = 0; w <= limit; ++w) {
    const auto [r, v] = m.maxrow_value(col, w);
    if (v < w) break;
    if (out.empty() || out.back().index != r) out.push_back({r, v});
  }
}

}  // namespace

MonotoneMatrix bottom_case(const Forest& forest, const Spine& spine, const SpineMatrices& mats,
                           int x, const SimMatrix& s_prev, const Target& t,
                           SubcubicStats* stats) {
  const int k = spine.k();
  if (x < 1 || x > k) throw std::out_of_range("bottom_case: spine index out of range");
  const int n = t.dimension();
  const int limit = 2 * spine.gap;
  const Label ux = forest.label(spine.u[static_cast<std::size_t>(x)]);
  const MonotoneMatrix& lm = mats.left(x + 1, k + 1).mat;
  const MonotoneMatrix& rm = mats.right(x + 1, k + 1).mat;
  MonotoneMatrix out = MonotoneMatrix::new_neg_inf(n, n);
  std::vector<Hit> is;
  std::vector<Hit> js;
  for (NodeId v = 1; v <= t.size(); ++v) {
    const int lv = t.l(v);
    const int rv = t.r(v);
    mincol_hits(lm, lv + 1, limit, is);
    maxrow_hits(rm, rv - 1, limit, js);
    Value best = kNegInf;
    for (const Hit& hi : is) {
      for (const Hit& hj : js) {
        if (hi.index > hj.index) continue;
        best = std::max(best, sat_add(hi.value, s_prev.mat.get(hi.index, hj.index), hj.value));
      }
    }
    if (stats != nullptr) stats->bottom_terms += static_cast<std::int64_t>(is.size() * js.size());
    out.assign_max(lv, rv, sat_add(best, pair_weight(ux, t.label(v))));
  }
  return out;
}

void middle_case(const Forest& forest, const Spine& spine, const SpineMatrices& mats, int x,
                 const std::vector<MonotoneMatrix>& restricted, const Target& t,
                 PathMaxTree& paths, MonotoneMatrix& out, SubcubicStats* stats) {
  const int k = spine.k();
  if (x < 1 || x > k) throw std::out_of_range("middle_case: spine index out of range");
  if (x == k) return;
  const int limit = 2 * spine.gap;
  const Label ux = forest.label(spine.u[static_cast<std::size_t>(x)]);
  const Forest& t2 = t.forest();
  paths.reset();
  std::vector<NodeId> g_nodes;  // g_nodes[z-1]: topmost-reaching ancestor for threshold z
  std::vector<NodeId> h_nodes;
  std::vector<PathSegment> segments;
  for (int y = x + 1; y <= k; ++y) {
    const MonotoneMatrix& lm = mats.left(x + 1, y).mat;
    const MonotoneMatrix& rm = mats.right(x + 1, y).mat;
    const MonotoneMatrix& sy = restricted.at(static_cast<std::size_t>(y));
    for (NodeId vp = 1; vp <= t.size(); ++vp) {
      const NodeId par = t.parent(vp);
      if (par == kVirtualRoot) continue;
      const Value base = sy.get(t.l(vp), t.r(vp));
      if (base == kNegInf) continue;
      // g(v) = s_{l(v)+1, l(v')}(l_{x+1,y}) reaches z exactly on the
      // ancestors with l(v) <= maxrow - 1; likewise h(v) on the right.
      g_nodes.clear();
      for (int z = 1; z <= limit; ++z) {
        const auto [row, g] = lm.maxrow_value(t.l(vp), z);
        if (g < z) break;
        const NodeId a = t.deepest_ancestor_l_at_most(vp, row - 1);
        if (a == kVirtualRoot) break;
        g_nodes.push_back(a);
      }
      h_nodes.clear();
      for (int w = 1; w <= limit; ++w) {
        const int col = rm.mincol(t.r(vp), w);
        if (rm.get(t.r(vp), col) < w) break;
        const NodeId b = t.deepest_ancestor_r_at_least(vp, col + 1);
        if (b == kVirtualRoot) break;
        h_nodes.push_back(b);
      }
      // Merge breakpoints bottom-up; f = g + h is constant between them.
      segments.clear();
      std::size_t gi = 0;
      std::size_t hi = 0;
      NodeId at = par;
      for (;;) {
        while (gi < g_nodes.size() && t2.depth(g_nodes[gi]) >= t2.depth(at)) ++gi;
        while (hi < h_nodes.size() && t2.depth(h_nodes[hi]) >= t2.depth(at)) ++hi;
        const Value f = static_cast<Value>(gi + hi);
        if (segments.empty() || segments.back().value != base + f) {
          segments.push_back({at, base + f});
        }
        NodeId next = kVirtualRoot;
        int next_depth = -1;
        if (gi < g_nodes.size()) {
          next = g_nodes[gi];
          next_depth = t2.depth(next);
        }
        if (hi < h_nodes.size() && t2.depth(h_nodes[hi]) > next_depth) next = h_nodes[hi];
        if (next == kVirtualRoot) break;
        at = next;
      }
      paths.path_update(par, segments);
      if (stats != nullptr) {
        ++stats->middle_updates;
        stats->middle_segments += static_cast<std::int64_t>(segments.size());
      }
    }
  }
  for (NodeId v = 1; v <= t.size(); ++v) {
    const Value phi = paths.query(v);
    if (phi == kNegInf) continue;
    out.assign_max(t.l(v), t.r(v), phi + pair_weight(ux, t.label(v)));
  }
}

std::vector<MonotoneMatrix> restricted_matrices(const Forest& forest, const Spine& spine,
                                                const SpineMatrices& mats,
                                                const SimMatrix& s_prev, const Target& t,
                                                SubcubicStats* stats) {
  const int k = spine.k();
  std::vector<MonotoneMatrix> restricted(static_cast<std::size_t>(k) + 1);
  PathMaxTree paths(t.forest());
  for (int x = k; x >= 1; --x) {
    MonotoneMatrix sx = bottom_case(forest, spine, mats, x, s_prev, t, stats);
    middle_case(forest, spine, mats, x, restricted, t, paths, sx, stats);
    restricted[static_cast<std::size_t>(x)] = std::move(sx);
  }
  return restricted;
}

SimMatrix product_sim(const SimMatrix& a, const SimMatrix& b, const Target& t,
                      const BDKernel& kernel, int mul3_cutoff, SubcubicStats* stats) {
  if (a.forest_size == 0) return b;
  if (b.forest_size == 0) return a;
  Mul3Stats local;
  SimMatrix out{structured_product(a.mat, b.mat, a.bound(t), b.bound(t), kernel, mul3_cutoff,
                                   &local),
                a.forest_size + b.forest_size};
  if (stats != nullptr) {
    ++stats->products;
    stats->mul3.kernel_calls += local.kernel_calls;
    stats->mul3.mul2_calls += local.mul2_calls;
    stats->mul3.max_depth = std::max(stats->mul3.max_depth, local.max_depth);
  }
  return out;
}

SimMatrix top_transition(const Spine& spine, const SpineMatrices& mats, const SimMatrix& s_prev,
                         const std::vector<MonotoneMatrix>& restricted, const Target& t,
                         const BDKernel& kernel, int mul3_cutoff, SubcubicStats* stats) {
  const int k = spine.k();
  // No spine node mapped.
  SimMatrix s = product_sim(
      product_sim(mats.left(1, k + 1), s_prev, t, kernel, mul3_cutoff, stats),
      mats.right(1, k + 1), t, kernel, mul3_cutoff, stats);
  const int limit = 2 * spine.gap;
  std::vector<Hit> is;
  std::vector<Hit> js;
  for (int x = 1; x <= k; ++x) {
    const MonotoneMatrix& lm = mats.left(1, x).mat;
    const MonotoneMatrix& rm = mats.right(1, x).mat;
    const MonotoneMatrix& sx = restricted.at(static_cast<std::size_t>(x));
    for (NodeId v = 1; v <= t.size(); ++v) {
      const Value mid = sx.get(t.l(v), t.r(v));
      if (mid == kNegInf) continue;
      maxrow_hits(lm, t.l(v), limit, is);
      mincol_hits(rm, t.r(v), limit, js);
      for (const Hit& hi : is) {
        for (const Hit& hj : js) s.mat.assign_max(hi.index, hj.index, sat_add(hi.value, mid, hj.value));
      }
      if (stats != nullptr) stats->top_terms += static_cast<std::int64_t>(is.size() * js.size());
    }
  }
  s.forest_size = s_prev.forest_size + spine.gap;
  return s;
}

SimMatrix type2_transition(const Forest& forest, SyncSubforest f, SyncSubforest f_prime,
                           const SimMatrix& s_prev, const Target& t, const BDKernel& kernel,
                           int mul3_cutoff, SubcubicStats* stats) {
  const Spine spine = build_spine(forest, f, f_prime);
  if (s_prev.forest_size != sync_size(forest, f_prime)) {
    throw std::invalid_argument("type2_transition: S(F') does not match F'");
  }
  if (spine.gap == 0) return s_prev;
  CubicStats* cubic = stats != nullptr ? &stats->cubic : nullptr;
  const SpineMatrices mats(forest, spine, t, cubic);
  const auto restricted = restricted_matrices(forest, spine, mats, s_prev, t, stats);
  if (stats != nullptr) ++stats->type2;
  return top_transition(spine, mats, s_prev, restricted, t, kernel, mul3_cutoff, stats);
}

namespace {

struct Decomposer {
  const Forest& forest;
  const Target& t;
  int delta;
  const BDKernel& kernel;
  DecompositionPlan* plan;
  SubcubicStats* stats;
  int cutoff;

  SimMatrix compute(SyncSubforest f) {
    if (f.empty()) return empty_sim(t);
    const DecompositionStep step = choose_step(forest, f, delta);
    const SyncSubforest source = step.kind == TransitionKind::TypeI ? step.left : step.source;
    if (plan != nullptr) {
      plan->log.push_back(TransitionRecord{step.kind, f, source, sync_size(forest, f),
                                           sync_size(forest, source)});
    }
    if (step.kind == TransitionKind::TypeI) {
      const SimMatrix left = compute(step.left);
      const SimMatrix rest = compute(step.rest);
      return product_sim(left, rest, t, kernel, cutoff, stats);
    }
    const SimMatrix prev = compute(step.source);
    return type2_transition(forest, f, step.source, prev, t, kernel, cutoff, stats);
  }
};

}  // namespace

SimMatrix decompose_compute(const Forest& forest, const Target& t, int delta,
                            const BDKernel& kernel, DecompositionPlan* plan,
                            SubcubicStats* stats, int mul3_cutoff) {
  if (delta < 1) throw std::invalid_argument("decompose_compute: delta must be >= 1");
  if (plan != nullptr) {
    plan->delta = delta;
    plan->log.clear();
  }
  Decomposer d{forest, t, delta, kernel, plan, stats, mul3_cutoff};
  return d.compute(whole(forest));
}

int default_delta(int t2_size) {
  return std::max(1, static_cast<int>(std::lround(std::pow(std::max(t2_size, 0), 0.4773))));
}

int ted_subcubic(const Forest& f1, const Forest& f2, const SubcubicOptions& options,
                 SubcubicStats* stats, DecompositionPlan* plan) {
  const bool swap = f1.size() < f2.size();
  const Forest& big = swap ? f2 : f1;
  const Forest& small = swap ? f1 : f2;
  const Target t(small);
  const int delta = options.delta.value_or(default_delta(small.size()));
  const BDKernel kernel = make_kernel(options.kernel);
  const SimMatrix s = decompose_compute(big, t, delta, kernel, plan, stats, options.mul3_cutoff);
  return sim_ed_convert(s.mat.get(1, t.dimension()), big.size(), small.size());
}

}  // namespace ted
