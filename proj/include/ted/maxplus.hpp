#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "ted/dense_block.hpp"
#include "ted/monotone_matrix.hpp"

namespace ted {

/// Bounded-difference max-plus kernel: (A: l x l, B: l x n) -> A * B.
/// Implementations must be exact and reentrant.
using BDKernel = std::function<DenseBlock(const DenseBlock&, const DenseBlock&)>;

/// Reference triple loop with -inf absorption.
DenseBlock naive_maxplus(const DenseBlock& a, const DenseBlock& b);
/// Same product, rows distributed over OpenMP threads with a
/// cache-friendly i-k-j loop order.
DenseBlock maxplus_omp(const DenseBlock& a, const DenseBlock& b);

enum class KernelKind { Naive, Plugged };
BDKernel make_kernel(KernelKind kind);
KernelKind parse_kernel(const std::string& name);
std::string to_string(KernelKind kind);

struct Mul1Stats {
  std::int64_t iterations = 0;      // nominal (j, x, y) iterations: n (m_B+1)(m_A+1)
  std::int64_t rangemax_calls = 0;  // distinct triples actually written
};

/// Receives every covered triple (i, k, j), 1-based.
using TripleObserver = std::function<void(int i, int k, int j)>;

/// C = A * B for n x n row/column-monotone matrices where A is
/// m_A-bounded-upper-triangular and B is m_B-bounded-upper-triangular.
MonotoneMatrix mul1(const MonotoneMatrix& a, const MonotoneMatrix& b, int m_a, int m_b,
                    Mul1Stats* stats = nullptr, const TripleObserver* observer = nullptr);

/// C = max(C', A * B) where A is an l x l monotone block with entries in
/// [0, m], B is l x n. Only the m + 1 largest values of each column of B are
/// enumerated.
MonotoneMatrix mul2(const DenseBlock& a, const MonotoneMatrix& b, const MonotoneMatrix& c_prev,
                    int m);

/// mul2 over dense blocks; A's entries may be any finite range (they are
/// shifted internally). Used inside mul3.
DenseBlock mul2_dense(const DenseBlock& a, const DenseBlock& b, const DenseBlock& c_prev);

/// Replaces every entry below the main diagonal with W (j - i).
DenseBlock neg_inf_fill(const DenseBlock& a, int w);

struct Mul3Stats {
  std::int64_t kernel_calls = 0;  // square l x l kernel invocations
  std::int64_t mul2_calls = 0;
  std::int64_t max_depth = 0;
};

/// C' = A' * B' for an l x l filled A' (l a power of two) and l x n filled
/// B' by the divide-and-conquer recursion; blocks of size <= cutoff go to
/// the kernel as ceil(n / l) square calls.
DenseBlock mul3(const DenseBlock& a, const DenseBlock& b, int cutoff, const BDKernel& kernel,
                Mul3Stats* stats = nullptr);

/// Kernel cutoff used when none is given: round(m^1.0963), at least 1.
int default_mul3_cutoff(int m);

/// C = A * B for similarity-shaped matrices (zero diagonal, finite upper
/// triangle, 2-bounded-difference), A m-bounded-upper-triangular. Dense
/// wrapper around mul3. cutoff <= 0 selects default_mul3_cutoff(m).
MonotoneMatrix monotone_bd_product(const MonotoneMatrix& a, const MonotoneMatrix& b, int m,
                                const BDKernel& kernel, int cutoff = 0,
                                Mul3Stats* stats = nullptr);

/// R(M)_{ij} = M_{N+1-j, N+1-i}; R(A * B) = R(B) * R(A).
MonotoneMatrix anti_transpose(const MonotoneMatrix& m);

/// monotone_bd_product with the smaller bound on the left, using the
/// anti-transpose identity when B has the smaller bound.
MonotoneMatrix structured_product(const MonotoneMatrix& a, const MonotoneMatrix& b, int m_a,
                                  int m_b, const BDKernel& kernel, int cutoff = 0,
                                  Mul3Stats* stats = nullptr);

}  // namespace ted
