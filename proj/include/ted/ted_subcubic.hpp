#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ted/forest.hpp"
#include "ted/maxplus.hpp"
#include "ted/path_max.hpp"
#include "ted/ted_cubic.hpp"

namespace ted {

enum class TransitionKind {
  TypeI,         // S(F) = S(L_F) * S(F - L_F), both sides >= delta
  TypeIIBase,    // |F| <= 3 delta: spine transition from an empty F'
  TypeIIFirst,   // F' has < 2 trees or a flanking tree smaller than delta
  TypeIISecond,  // F' has >= 2 trees, both flanking trees >= delta
};
std::string to_string(TransitionKind kind);

struct TransitionRecord {
  TransitionKind kind = TransitionKind::TypeI;
  SyncSubforest target;  // F
  SyncSubforest source;  // type I: L_F; type II: F'
  int target_size = 0;
  int source_size = 0;
};

struct DecompositionPlan {
  int delta = 1;
  std::vector<TransitionRecord> log;

  [[nodiscard]] int count(TransitionKind kind) const;
  [[nodiscard]] int size() const { return static_cast<int>(log.size()); }
};

/// One decision of the decomposition: either a type I split (left, rest)
/// or a type II transition from `source` (possibly empty).
struct DecompositionStep {
  TransitionKind kind = TransitionKind::TypeI;
  SyncSubforest left;    // type I only
  SyncSubforest rest;    // type I only
  SyncSubforest source;  // type II only
};

/// The decision rule of the decomposition for a nonempty synchronous
/// subforest f of `forest`. For |F| <= 3 delta the source is the empty
/// subforest below the leaf reached by following largest children.
DecompositionStep choose_step(const Forest& forest, SyncSubforest f, int delta);

/// Runs only the decision rule over the whole forest (no matrices).
DecompositionPlan plan_decomposition(const Forest& forest, int delta);

/// Path u_0 ... u_k from vroot(F) down to vroot(F') and the flanking
/// subforests l_1..l_{k+1}, r_1..r_{k+1} (index 0 unused).
struct Spine {
  SyncSubforest f;
  SyncSubforest f_prime;
  std::vector<NodeId> u;  // u[0] = vroot(F), u[k] = vroot(F')
  std::vector<SyncSubforest> left;
  std::vector<SyncSubforest> right;
  int gap = 0;  // |F| - |F'|

  [[nodiscard]] int k() const noexcept { return static_cast<int>(u.size()) - 1; }
};

/// Throws std::invalid_argument when F' is not a synchronous subforest of F.
Spine build_spine(const Forest& forest, SyncSubforest f, SyncSubforest f_prime);

/// S(l_{i,j}) and S(r_{i,j}) for 1 <= i <= j <= k+1, and S(empty) at j = i-1.
class SpineMatrices {
 public:
  SpineMatrices(const Forest& forest, const Spine& spine, const Target& t,
                CubicStats* stats = nullptr);
  [[nodiscard]] const SimMatrix& left(int i, int j) const;
  [[nodiscard]] const SimMatrix& right(int i, int j) const;

 private:
  int k_ = 0;
  std::vector<std::vector<SimMatrix>> left_;   // left_[i][j - i + 1]
  std::vector<std::vector<SimMatrix>> right_;
};

struct SubcubicStats {
  CubicStats cubic;               // flank matrices and prefix/suffix products
  Mul3Stats mul3;                 // structured products
  std::int64_t products = 0;      // structured products performed
  std::int64_t type2 = 0;         // type II transitions executed
  std::int64_t bottom_terms = 0;  // (v, i, j) combinations evaluated
  std::int64_t middle_updates = 0;
  std::int64_t middle_segments = 0;
  std::int64_t top_terms = 0;
};

/// Contribution of mappings where u_x is mapped and no deeper spine node is.
MonotoneMatrix bottom_case(const Forest& forest, const Spine& spine, const SpineMatrices& mats,
                           int x, const SimMatrix& s_prev, const Target& t,
                           SubcubicStats* stats = nullptr);

/// Adds into `out` the contribution of mappings where u_x and some deeper
/// u_y are mapped; restricted[y] holds the restricted matrix of sub(u_y).
void middle_case(const Forest& forest, const Spine& spine, const SpineMatrices& mats, int x,
                 const std::vector<MonotoneMatrix>& restricted, const Target& t,
                 PathMaxTree& paths, MonotoneMatrix& out, SubcubicStats* stats = nullptr);

/// Restricted matrices of sub(u_x) for x = 1..k (index 0 unused).
std::vector<MonotoneMatrix> restricted_matrices(const Forest& forest, const Spine& spine,
                                                const SpineMatrices& mats,
                                                const SimMatrix& s_prev, const Target& t,
                                                SubcubicStats* stats = nullptr);

/// S(F) from the no-spine-node-mapped product and the restricted matrices.
SimMatrix top_transition(const Spine& spine, const SpineMatrices& mats, const SimMatrix& s_prev,
                         const std::vector<MonotoneMatrix>& restricted, const Target& t,
                         const BDKernel& kernel, int mul3_cutoff = 0,
                         SubcubicStats* stats = nullptr);

/// S(F) from S(F') for a synchronous subforest F' of F.
SimMatrix type2_transition(const Forest& forest, SyncSubforest f, SyncSubforest f_prime,
                           const SimMatrix& s_prev, const Target& t, const BDKernel& kernel,
                           int mul3_cutoff = 0, SubcubicStats* stats = nullptr);

/// S(A + B) by the structured product (identity shortcut for empty sides).
SimMatrix product_sim(const SimMatrix& a, const SimMatrix& b, const Target& t,
                      const BDKernel& kernel, int mul3_cutoff = 0,
                      SubcubicStats* stats = nullptr);

/// S(F) for the whole forest by the block decomposition.
SimMatrix decompose_compute(const Forest& forest, const Target& t, int delta,
                            const BDKernel& kernel, DecompositionPlan* plan = nullptr,
                            SubcubicStats* stats = nullptr, int mul3_cutoff = 0);

/// max(1, round(|T2|^0.4773)).
int default_delta(int t2_size);

struct SubcubicOptions {
  std::optional<int> delta;
  KernelKind kernel = KernelKind::Naive;
  int mul3_cutoff = 0;  // 0: derived from the product's bound
};

/// Edit distance via decompose_compute, larger forest first.
int ted_subcubic(const Forest& f1, const Forest& f2, const SubcubicOptions& options = {},
                 SubcubicStats* stats = nullptr, DecompositionPlan* plan = nullptr);

}  // namespace ted
