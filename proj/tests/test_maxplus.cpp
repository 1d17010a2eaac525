#include <gtest/gtest.h>

#include <random>

#include "support/test_util.hpp"
#include "ted/maxplus.hpp"
#include "ted/oracle.hpp"
#include "ted/ted_cubic.hpp"

namespace ted {
namespace {

using testing::random_similarity_shaped;

DenseBlock random_block(int rows, int cols, std::mt19937_64& rng, bool with_neg_inf) {
  DenseBlock d(rows, cols);
  std::uniform_int_distribution<int> val(-20, 20);
  std::uniform_int_distribution<int> hole(0, 5);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) d.at(r, c) = with_neg_inf && hole(rng) == 0 ? kNegInf : val(rng);
  }
  return d;
}

DenseBlock elementwise_max(const DenseBlock& a, const DenseBlock& b) {
  DenseBlock out = a;
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) out.at(r, c) = std::max(a.at(r, c), b.at(r, c));
  }
  return out;
}

/// Upper triangle of the naive product with -inf below the diagonal.
DenseBlock upper_product(const MonotoneMatrix& a, const MonotoneMatrix& b) {
  DenseBlock c = naive_maxplus(a.to_dense(), b.to_dense());
  for (int i = 0; i < c.rows(); ++i) {
    for (int j = 0; j < i; ++j) c.at(i, j) = kNegInf;
  }
  return c;
}

TEST(NaiveMaxplus, Basics) {
  DenseBlock one(1, 1, 0);
  EXPECT_EQ(naive_maxplus(one, one).at(0, 0), 0);
  std::mt19937_64 rng(1);
  DenseBlock a = random_block(3, 3, rng, false);
  for (int c = 0; c < 3; ++c) a.at(1, c) = kNegInf;
  const DenseBlock b = random_block(3, 4, rng, false);
  const DenseBlock p = naive_maxplus(a, b);
  for (int c = 0; c < 4; ++c) EXPECT_EQ(p.at(1, c), kNegInf);
  for (int r : {0, 2}) {
    for (int c = 0; c < 4; ++c) {
      Value want = kNegInf;
      for (int k = 0; k < 3; ++k) want = std::max(want, a.at(r, k) + b.at(k, c));
      EXPECT_EQ(p.at(r, c), want);
    }
  }
  EXPECT_THROW(naive_maxplus(DenseBlock(2, 3), DenseBlock(2, 3)), std::invalid_argument);
}

TEST(MaxplusOmp, MatchesNaive) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const int l = std::uniform_int_distribution<int>(1, 20)(rng);
    const int n = std::uniform_int_distribution<int>(1, 20)(rng);
    const DenseBlock a = random_block(l, l, rng, true);
    const DenseBlock b = random_block(l, n, rng, true);
    ASSERT_EQ(maxplus_omp(a, b), naive_maxplus(a, b));
  }
}

TEST(Kernel, ParseAndMake) {
  EXPECT_EQ(parse_kernel("naive"), KernelKind::Naive);
  EXPECT_EQ(parse_kernel("plugged"), KernelKind::Plugged);
  EXPECT_EQ(to_string(KernelKind::Plugged), "plugged");
  EXPECT_THROW(parse_kernel("fast"), std::invalid_argument);
  std::mt19937_64 rng(3);
  const DenseBlock a = random_block(4, 4, rng, false);
  EXPECT_EQ(make_kernel(KernelKind::Plugged)(a, a), naive_maxplus(a, a));
}

TEST(Mul1, ZeroUpperTriangleIsIdentity) {
  std::mt19937_64 rng(4);
  const int n = 9;
  DenseBlock zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) zero.at(i, j) = 0;
  }
  const MonotoneMatrix z = MonotoneMatrix::from_dense(zero);
  const MonotoneMatrix b = random_similarity_shaped(n, 8, rng);
  EXPECT_EQ(mul1(z, b, 0, 8).to_dense(), b.to_dense());
  EXPECT_EQ(mul1(b, z, 8, 0).to_dense(), b.to_dense());
}

TEST(Mul1, MatchesNaiveOnRandomShapes) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 41)(rng);
    const int ma = std::uniform_int_distribution<int>(0, 10)(rng);
    const int mb = std::uniform_int_distribution<int>(0, 10)(rng);
    const MonotoneMatrix a = random_similarity_shaped(n, ma, rng);
    const MonotoneMatrix b = random_similarity_shaped(n, mb, rng);
    Mul1Stats stats;
    const MonotoneMatrix c = mul1(a, b, ma, mb, &stats);
    ASSERT_EQ(testing::compare_upper(c, upper_product(a, b)), "") << "trial " << trial;
    EXPECT_EQ(stats.iterations, static_cast<std::int64_t>(n) * (ma + 1) * (mb + 1));
  }
}

TEST(Mul1, ObserverSeesOnlyUpperTriples) {
  std::mt19937_64 rng(6);
  const MonotoneMatrix a = random_similarity_shaped(7, 4, rng);
  const MonotoneMatrix b = random_similarity_shaped(7, 4, rng);
  int count = 0;
  const TripleObserver obs = [&](int i, int k, int j) {
    EXPECT_LE(i, k);
    EXPECT_LE(k, j);
    ++count;
  };
  Mul1Stats stats;
  (void)mul1(a, b, 4, 4, &stats, &obs);
  EXPECT_GT(count, 0);
  EXPECT_EQ(count, stats.rangemax_calls);
}

TEST(Mul2, ColumnMaxBroadcastAndDominatedPrevious) {
  std::mt19937_64 rng(7);
  const int l = 6;
  const int n = 9;
  DenseBlock bd(l, n);
  const MonotoneMatrix shaped = random_similarity_shaped(l + n, 6, rng);
  const DenseBlock full = shaped.to_dense();
  for (int r = 0; r < l; ++r) {
    for (int c = 0; c < n; ++c) bd.at(r, c) = full.at(r, l + c - 3 >= 0 ? l + c - 3 : 0);
  }
  const MonotoneMatrix b = MonotoneMatrix::from_dense(bd);
  const DenseBlock zeros(l, l, 0);
  const MonotoneMatrix c =
      mul2(zeros, b, MonotoneMatrix::new_neg_inf(l, n), 0);
  for (int i = 1; i <= l; ++i) {
    for (int j = 1; j <= n; ++j) EXPECT_EQ(c.get(i, j), b.get(1, j));
  }
  const MonotoneMatrix huge = MonotoneMatrix::new_neg_inf(l, n).rangemax(l, 1, 1000);
  EXPECT_EQ(mul2(zeros, b, huge, 0).to_dense(), huge.to_dense());
  EXPECT_THROW(mul2(DenseBlock(l, l, 5), b, huge, 4), std::invalid_argument);
}

TEST(Mul2, MatchesNaiveOnRandomTriples) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int l = std::uniform_int_distribution<int>(1, 32)(rng);
    const int n = std::uniform_int_distribution<int>(1, 32)(rng);
    const int m = std::uniform_int_distribution<int>(0, 6)(rng);
    // A: top-right block of a similarity-shaped matrix (finite, in [0, m]).
    const DenseBlock sa = random_similarity_shaped(2 * l, m, rng).to_dense();
    const DenseBlock a = sa.block(0, l, l, l);
    // B: rows of a similarity-shaped matrix, shifted so -inf appears.
    const DenseBlock sb = random_similarity_shaped(l + n, 12, rng).to_dense();
    const int shift = std::uniform_int_distribution<int>(0, l)(rng);
    DenseBlock bd(l, n);
    for (int r = 0; r < l; ++r) {
      for (int c = 0; c < n; ++c) bd.at(r, c) = sb.at(r, std::min(l + n - 1, c + shift));
    }
    const MonotoneMatrix b = MonotoneMatrix::from_dense(bd);
    MonotoneMatrix prev = MonotoneMatrix::new_neg_inf(l, n);
    for (int p = 0; p < 3; ++p) {
      prev.assign_max(std::uniform_int_distribution<int>(1, l)(rng),
                      std::uniform_int_distribution<int>(1, n)(rng),
                      std::uniform_int_distribution<int>(0, 20)(rng));
    }
    const DenseBlock want = elementwise_max(prev.to_dense(), naive_maxplus(a, bd));
    ASSERT_EQ(mul2(a, b, prev, m).to_dense(), want) << "trial " << trial;
    ASSERT_EQ(mul2_dense(a, bd, prev.to_dense()), want) << "trial " << trial;
  }
}

TEST(NegInfFill, Formula) {
  DenseBlock a(2, 2);
  a.at(0, 0) = 0;
  a.at(0, 1) = 1;
  a.at(1, 1) = 0;
  const DenseBlock f = neg_inf_fill(a, 2);
  EXPECT_EQ(f.at(1, 0), -2);
  EXPECT_EQ(f.at(0, 1), 1);
  DenseBlock one(1, 1, 0);
  EXPECT_EQ(neg_inf_fill(one, 2), one);
}

/// Filled similarity-shaped l x l block and an l x n block cut from the
/// rows of a filled similarity-shaped matrix.
std::pair<DenseBlock, DenseBlock> filled_pair(int l, int n, std::mt19937_64& rng) {
  const DenseBlock a = neg_inf_fill(random_similarity_shaped(l, l, rng).to_dense(), 2);
  const int side = std::max(l, n);
  const DenseBlock b = neg_inf_fill(random_similarity_shaped(side, side, rng).to_dense(), 2);
  return {a, b.block(0, 0, l, n)};
}

TEST(Mul3, BaseCaseIsKernel) {
  std::mt19937_64 rng(9);
  const auto [a, b] = filled_pair(8, 8, rng);
  Mul3Stats stats;
  EXPECT_EQ(mul3(a, b, 8, make_kernel(KernelKind::Naive), &stats), naive_maxplus(a, b));
  EXPECT_EQ(stats.kernel_calls, 1);
  EXPECT_EQ(stats.mul2_calls, 0);
  EXPECT_THROW(mul3(DenseBlock(3, 3, 0), DenseBlock(3, 3, 0), 1, make_kernel(KernelKind::Naive)),
               std::invalid_argument);
  EXPECT_THROW(mul3(a, b, 0, make_kernel(KernelKind::Naive)), std::invalid_argument);
}

TEST(Mul3, ZeroFilledLeftOperand) {
  std::mt19937_64 rng(10);
  const int l = 16;
  DenseBlock zero(l, l);
  for (int i = 0; i < l; ++i) {
    for (int j = i; j < l; ++j) zero.at(i, j) = 0;
  }
  const DenseBlock a = neg_inf_fill(zero, 2);
  const DenseBlock b = filled_pair(l, 24, rng).second;
  EXPECT_EQ(mul3(a, b, 2, make_kernel(KernelKind::Naive)), naive_maxplus(a, b));
}

TEST(Mul3, MatchesNaiveForEveryCutoff) {
  std::mt19937_64 rng(11);
  for (int seed = 0; seed < 50; ++seed) {
    const auto [a, b] = filled_pair(32, 48, rng);
    const DenseBlock want = naive_maxplus(a, b);
    for (int cutoff : {4, 8, 32}) {
      for (KernelKind kind : {KernelKind::Naive, KernelKind::Plugged}) {
        ASSERT_EQ(mul3(a, b, cutoff, make_kernel(kind)), want)
            << "seed " << seed << " cutoff " << cutoff;
      }
    }
  }
}

TEST(MonotoneBdProduct, ZeroSimilarityIsIdentity) {
  LabelTable labels;
  const Target t(parse_forest("d(b,a(a),c,c)", labels));
  const SimMatrix s = dp_similarity(parse_forest("a(a(b,c,c))", labels), t);
  const SimMatrix e = empty_sim(t);
  const BDKernel k = make_kernel(KernelKind::Naive);
  EXPECT_EQ(monotone_bd_product(e.mat, s.mat, 0, k).to_dense(), s.mat.to_dense());
  EXPECT_EQ(monotone_bd_product(s.mat, e.mat, s.bound(t), k).to_dense(), s.mat.to_dense());
}

TEST(MonotoneBdProduct, ConcatenationOfRandomForests) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Forest f1 = testing::random_small_forest(1 + static_cast<int>(seed % 5), 2, seed);
    const Forest f2 = testing::random_small_forest(1 + static_cast<int>(seed % 7), 2, seed + 77);
    const Forest t2 = random_forest(1 + static_cast<int>(seed % 9), 2, seed + 99);
    const Target t(t2);
    const SimMatrix a = dp_similarity(f1, t);
    const SimMatrix b = dp_similarity(f2, t);
    const DenseBlock naive = similarity_matrix_naive(concatenate(f1, f2), t2);
    for (int cutoff : {1, 2, 4, 0}) {
      Mul3Stats stats;
      const MonotoneMatrix c =
          monotone_bd_product(a.mat, b.mat, a.bound(t), make_kernel(KernelKind::Naive), cutoff,
                              &stats);
      ASSERT_EQ(testing::compare_upper(c, naive), "") << "seed " << seed;
      ASSERT_EQ(c.to_dense(), mul1(a.mat, b.mat, a.bound(t), b.bound(t)).to_dense());
      const MonotoneMatrix s = structured_product(a.mat, b.mat, a.bound(t), b.bound(t),
                                                  make_kernel(KernelKind::Plugged), cutoff);
      ASSERT_EQ(testing::compare_upper(s, naive), "") << "seed " << seed;
    }
  }
}

TEST(MonotoneBdProduct, RejectsUnstructuredOperands) {
  DenseBlock bad(3, 3, kNegInf);
  bad.at(0, 0) = 1;
  bad.at(1, 1) = 0;
  bad.at(2, 2) = 0;
  const MonotoneMatrix m = MonotoneMatrix::from_dense(bad);
  EXPECT_THROW(monotone_bd_product(m, m, 2, make_kernel(KernelKind::Naive)),
               std::invalid_argument);
}

TEST(AntiTranspose, ReversesProducts) {
  std::mt19937_64 rng(12);
  const MonotoneMatrix a = random_similarity_shaped(11, 5, rng);
  const MonotoneMatrix b = random_similarity_shaped(11, 7, rng);
  const DenseBlock ab = upper_product(a, b);
  const DenseBlock rab = upper_product(anti_transpose(b), anti_transpose(a));
  for (int i = 0; i < 11; ++i) {
    for (int j = 0; j < 11; ++j) EXPECT_EQ(ab.at(i, j), rab.at(10 - j, 10 - i));
  }
  EXPECT_EQ(anti_transpose(anti_transpose(a)).to_dense(), a.to_dense());
}

}  // namespace
}  // namespace ted
