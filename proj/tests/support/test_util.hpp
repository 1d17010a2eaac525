#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ted/dense_block.hpp"
#include "ted/forest.hpp"
#include "ted/monotone_matrix.hpp"
#include "ted/oracle.hpp"
#include "ted/ted_cubic.hpp"

namespace ted::testing {

/// Parses with a fresh (or shared) label table.
inline Forest tree(std::string_view text, LabelTable& labels) { return parse_forest(text, labels); }

/// A forest of 1..max_trees random trees totalling exactly n nodes.
inline Forest random_small_forest(int n, int alphabet, std::uint64_t seed, int max_trees = 3) {
  std::mt19937_64 rng(seed);
  Forest out;
  int left = n;
  int trees = std::uniform_int_distribution<int>(1, std::max(1, max_trees))(rng);
  while (left > 0) {
    const int take = trees <= 1 ? left : std::uniform_int_distribution<int>(1, left)(rng);
    out = concatenate(out, random_forest(take, alphabet, rng()));
    left -= take;
    --trees;
  }
  return out;
}

/// Empty string when `m` equals `naive` (1-based cell (i, j) at (i-1, j-1))
/// on and above the diagonal and is -inf below it; else a description of
/// the first differing cell.
inline std::string compare_upper(const MonotoneMatrix& m, const DenseBlock& naive) {
  if (m.rows() != naive.rows() || m.cols() != naive.cols()) return "shape mismatch";
  for (int i = 1; i <= m.rows(); ++i) {
    for (int j = 1; j <= m.cols(); ++j) {
      const Value want = j >= i ? naive.at(i - 1, j - 1) : kNegInf;
      const Value got = m.get(i, j);
      if (got != want) {
        std::ostringstream s;
        s << "cell (" << i << "," << j << "): got " << got << ", expected " << want;
        return s.str();
      }
    }
  }
  return {};
}

/// Empty string when `m` is a similarity-shaped matrix: row- and
/// column-monotone, zero diagonal, finite upper triangle bounded by
/// `bound`, 2-bounded-difference there, -inf below the diagonal.
inline std::string check_similarity_shape(const MonotoneMatrix& m, int bound) {
  const int n = m.rows();
  std::ostringstream s;
  if (m.cols() != n) return "not square";
  const DenseBlock d = m.to_dense();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Value v = d.at(i, j);
      if (j < i) {
        if (v != kNegInf) {
          s << "finite below diagonal at (" << i + 1 << "," << j + 1 << ")";
          return s.str();
        }
        continue;
      }
      if (j == i && v != 0) {
        s << "nonzero diagonal at " << i + 1;
        return s.str();
      }
      if (v < 0 || v > bound) {
        s << "entry " << v << " outside [0, " << bound << "] at (" << i + 1 << "," << j + 1 << ")";
        return s.str();
      }
      if (j > i) {
        const Value left = d.at(i, j - 1);
        if (v < left || v - left > 2) {
          s << "row step " << left << " -> " << v << " at (" << i + 1 << "," << j + 1 << ")";
          return s.str();
        }
      }
      if (i + 1 <= j) {
        const Value below = d.at(i + 1, j);
        if (v < below || v - below > 2) {
          s << "column step " << below << " -> " << v << " at (" << i + 1 << "," << j + 1 << ")";
          return s.str();
        }
      }
    }
  }
  return {};
}

/// Random row/column-monotone similarity-shaped matrix of side n with
/// entries bounded by m: a random sum of unit steps.
inline MonotoneMatrix random_similarity_shaped(int n, int m, std::mt19937_64& rng) {
  DenseBlock d(n, n);
  for (int i = n - 1; i >= 0; --i) {
    d.at(i, i) = 0;
    for (int j = i + 1; j < n; ++j) {
      const Value left = d.at(i, j - 1);
      const Value below = i + 1 <= j ? d.at(i + 1, j) : 0;
      // Must be >= max(left, below) and <= min(left, below) + 2 and <= m.
      const Value lo = std::max(left, below);
      const Value hi = std::min({left + 2, below + 2, m});
      d.at(i, j) = lo >= hi ? lo : lo + std::uniform_int_distribution<int>(0, hi - lo)(rng);
    }
  }
  return MonotoneMatrix::from_dense(d);
}

/// Dense upper triangle of a MonotoneMatrix with -inf kept below.
inline DenseBlock dense(const MonotoneMatrix& m) { return m.to_dense(); }

}  // namespace ted::testing
