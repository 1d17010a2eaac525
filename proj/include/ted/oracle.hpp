#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "ted/dense_block.hpp"
#include "ted/forest.hpp"

namespace ted {

/// Thrown when an exponential oracle is asked to run beyond its size cap.
class OracleCapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Default cap on |F1| + |F2| for brute_force_sim; TED_ORACLE_CAP overrides.
int brute_force_cap();
/// Default cap on |T2| for similarity_matrix_naive.
inline constexpr int kNaiveMatrixCap = 30;

/// Unit-cost edit distance by the Zhang–Shasha keyroot recursion. Forests
/// are handled by hanging both under virtual roots carrying equal labels.
int zhang_shasha_ed(const Forest& f1, const Forest& f2);

/// Maximum mapping weight found by exhaustive enumeration of all
/// ancestry- and order-consistent mappings.
int brute_force_sim(const Forest& f1, const Forest& f2, int cap = brute_force_cap());

/// A mapping of maximum weight, as (node of F1, node of F2) pairs.
std::vector<std::pair<NodeId, NodeId>> brute_force_mapping(const Forest& f1, const Forest& f2,
                                                           int cap = brute_force_cap());

/// True when the pairs form a valid mapping between f1 and f2.
bool is_valid_mapping(const Forest& f1, const Forest& f2,
                      const std::vector<std::pair<NodeId, NodeId>>& pairs);

/// Converts between similarity and edit distance: n1 + n2 - value.
int sim_ed_convert(int value, int n1, int n2);

/// Dense (2|T2|+1)^2 similarity matrix of F against T2, one Zhang–Shasha
/// call per cell. Cell (i, j) (1-based) is stored at (i - 1, j - 1).
DenseBlock similarity_matrix_naive(const Forest& f, const Forest& t2, int cap = kNaiveMatrixCap);

/// Dense restricted similarity matrix of a tree T against T2: cell (i, j)
/// is the best mapping weight of T into T2[i, j) with root(T) mapped.
DenseBlock restricted_matrix_naive(const Forest& tree, const Forest& t2,
                                   int cap = kNaiveMatrixCap);

}  // namespace ted
