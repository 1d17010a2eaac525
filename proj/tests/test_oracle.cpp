#include <gtest/gtest.h>

#include "support/test_util.hpp"
#include "ted/oracle.hpp"

namespace ted {
namespace {

TEST(ZhangShasha, MappingPair) {
  LabelTable labels;
  const Forest t1 = parse_forest("a(b(c,d),e(f))", labels);
  const Forest t2 = parse_forest("a(c,d,e(g),h)", labels);
  EXPECT_EQ(zhang_shasha_ed(t1, t2), 3);
  EXPECT_EQ(zhang_shasha_ed(t2, t1), 3);
}

TEST(ZhangShasha, SmallCases) {
  LabelTable labels;
  EXPECT_EQ(zhang_shasha_ed(parse_forest("a(b,c)", labels), parse_forest("a(b)", labels)), 1);
  EXPECT_EQ(zhang_shasha_ed(Forest{}, Forest{}), 0);
  EXPECT_EQ(zhang_shasha_ed(parse_forest("a(b),c", labels), Forest{}), 3);
  EXPECT_EQ(zhang_shasha_ed(parse_forest("a", labels), parse_forest("b", labels)), 1);
  EXPECT_EQ(zhang_shasha_ed(parse_forest("a(b(c))", labels), parse_forest("a(c)", labels)), 1);
}

TEST(BruteForce, SmallCases) {
  LabelTable labels;
  const Forest a = parse_forest("a", labels);
  EXPECT_EQ(brute_force_sim(a, Forest{}), 0);
  EXPECT_EQ(brute_force_sim(Forest{}, parse_forest("a(b)", labels)), 0);
  EXPECT_EQ(brute_force_sim(a, a), 2);
  EXPECT_EQ(brute_force_sim(a, parse_forest("b", labels)), 1);
  EXPECT_EQ(brute_force_sim(parse_forest("a(b,c)", labels), parse_forest("a(b)", labels)), 4);
}

TEST(BruteForce, MappingPairWeightNine) {
  LabelTable labels;
  const Forest t1 = parse_forest("a(b(c,d),e(f))", labels);
  const Forest t2 = parse_forest("a(c,d,e(g),h)", labels);
  EXPECT_EQ(brute_force_sim(t1, t2), 9);
  const auto mapping = brute_force_mapping(t1, t2);
  EXPECT_TRUE(is_valid_mapping(t1, t2, mapping));
  int weight = 0;
  for (const auto& [u, v] : mapping) weight += pair_weight(t1.label(u), t2.label(v));
  EXPECT_EQ(weight, 9);
}

TEST(BruteForce, RejectsInvalidMappings) {
  LabelTable labels;
  const Forest t1 = parse_forest("a(b,c)", labels);
  const Forest t2 = parse_forest("a(b,c)", labels);
  EXPECT_TRUE(is_valid_mapping(t1, t2, {{1, 1}, {2, 2}, {3, 3}}));
  EXPECT_FALSE(is_valid_mapping(t1, t2, {{2, 3}, {3, 2}}));  // order
  EXPECT_FALSE(is_valid_mapping(t1, t2, {{1, 2}, {2, 1}}));  // ancestry
  EXPECT_FALSE(is_valid_mapping(t1, t2, {{1, 1}, {1, 2}}));  // not one-to-one
}

TEST(BruteForce, CapEnforced) {
  const Forest f = random_forest(15, 2, 1);
  EXPECT_THROW(brute_force_sim(f, f, 16), OracleCapExceeded);
  EXPECT_GE(brute_force_cap(), 1);
}

TEST(BruteForce, AgreesWithZhangShashaOnRandomPairs) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Forest f1 = testing::random_small_forest(static_cast<int>(seed % 8), 2, seed);
    const Forest f2 = testing::random_small_forest(static_cast<int>((seed / 8) % 8), 2, seed + 999);
    ASSERT_EQ(sim_ed_convert(brute_force_sim(f1, f2), f1.size(), f2.size()),
              zhang_shasha_ed(f1, f2))
        << "seed " << seed;
  }
}

TEST(SimEdConvert, Cases) {
  EXPECT_EQ(sim_ed_convert(9, 6, 6), 3);
  EXPECT_EQ(sim_ed_convert(0, 5, 5), 10);
  EXPECT_EQ(sim_ed_convert(0, 3, 4), 7);
  EXPECT_EQ(sim_ed_convert(7, 3, 4), 0);
  EXPECT_THROW(sim_ed_convert(8, 3, 4), std::out_of_range);
  EXPECT_THROW(sim_ed_convert(-1, 3, 4), std::out_of_range);
}

TEST(SimilarityMatrixNaive, EmptyForest) {
  const Forest t2 = random_forest(4, 2, 3);
  const DenseBlock s = similarity_matrix_naive(Forest{}, t2);
  ASSERT_EQ(s.rows(), 9);
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) EXPECT_EQ(s.at(i, j), j >= i ? 0 : kNegInf);
  }
}

TEST(SimilarityMatrixNaive, AntiMongeFixture) {
  LabelTable labels;
  const Forest t1 = parse_forest("a(a(b,c,c))", labels);
  const Forest t2 = parse_forest("d(b,a(a),c,c)", labels);
  const DenseBlock s = similarity_matrix_naive(t1, t2);
  EXPECT_EQ(s.at(1, 7), 4);
  EXPECT_EQ(s.at(3, 11), 5);
  EXPECT_EQ(s.at(1, 11), 6);
  EXPECT_EQ(s.at(3, 7), 4);
  EXPECT_LT(s.at(1, 7) + s.at(3, 11), s.at(1, 11) + s.at(3, 7));
}

TEST(SimilarityMatrixNaive, MatchesBruteForcePerCell) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Forest f = testing::random_small_forest(4, 2, seed);
    const Forest t2 = random_forest(4, 2, seed + 50);
    const BiOrderIndex o = bi_order(t2);
    const DenseBlock s = similarity_matrix_naive(f, t2);
    for (int i = 1; i <= o.dimension(); ++i) {
      for (int j = i; j <= o.dimension(); ++j) {
        ASSERT_EQ(s.at(i - 1, j - 1), brute_force_sim(f, subforest(t2, o, {i, j})));
      }
    }
  }
}

TEST(RestrictedMatrixNaive, RootForcedMapped) {
  LabelTable labels;
  const Forest tree = parse_forest("a(b)", labels);
  const Forest t2 = parse_forest("c(b),a", labels);
  const DenseBlock s = restricted_matrix_naive(tree, t2);
  // Only windows containing a whole node can host the root.
  EXPECT_EQ(s.at(0, 6), 3);  // map a->c, b->b
  EXPECT_EQ(s.at(4, 6), 2);  // a->a only
  EXPECT_EQ(s.at(1, 3), 1);  // a->b
  EXPECT_EQ(s.at(1, 2), kNegInf);
}

}  // namespace
}  // namespace ted
