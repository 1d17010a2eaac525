#include <gtest/gtest.h>

#include <random>

#include "ted/path_max.hpp"

namespace ted {
namespace {

TEST(PathMaxTree, SingleNode) {
  const Forest t = random_forest(1, 1, 1);
  PathMaxTree p(t);
  EXPECT_EQ(p.query(1), kNegInf);
  p.path_update(1, {{1, 5}});
  EXPECT_EQ(p.query(1), 5);
  p.reset();
  EXPECT_EQ(p.query(1), kNegInf);
}

TEST(PathMaxTree, MaxSemanticsAndCoverage) {
  LabelTable labels;
  const Forest t = parse_forest("a(b(c),d)", labels);
  PathMaxTree p(t);
  p.path_update(3, {{3, 3}});
  p.path_update(3, {{3, 7}});
  EXPECT_EQ(p.query(3), 7);
  EXPECT_EQ(p.query(1), 7);
  EXPECT_EQ(p.query(4), kNegInf);
  // Segments: c..(below b) = 1, b..(below a) = 2, a.. = 9.
  p.reset();
  p.path_update(3, {{3, 1}, {2, 2}, {1, 9}});
  EXPECT_EQ(p.query(3), 1);
  EXPECT_EQ(p.query(2), 2);
  EXPECT_EQ(p.query(1), 9);
}

TEST(PathMaxTree, RejectsBadSegments) {
  LabelTable labels;
  const Forest t = parse_forest("a(b(c),d)", labels);
  PathMaxTree p(t);
  EXPECT_THROW(p.path_update(3, {}), std::invalid_argument);
  EXPECT_THROW(p.path_update(3, {{2, 1}}), std::invalid_argument);
  EXPECT_THROW(p.path_update(3, {{3, 1}, {4, 2}}), std::invalid_argument);
  EXPECT_THROW(p.path_update(3, {{3, 1}, {3, 2}}), std::invalid_argument);
  EXPECT_THROW(p.path_update(9, {{9, 1}}), std::out_of_range);
  EXPECT_THROW((void)p.query(0), std::out_of_range);
}

TEST(PathMaxTree, RandomReplay) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 40)(rng);
    const Forest t = random_forest(n, 1, rng());
    PathMaxTree p(t);
    std::vector<Value> shadow(static_cast<std::size_t>(n) + 1, kNegInf);
    for (int op = 0; op < 200; ++op) {
      const NodeId from = std::uniform_int_distribution<int>(1, n)(rng);
      std::vector<NodeId> path;
      for (NodeId a = from; a != kVirtualRoot; a = t.parent(a)) path.push_back(a);
      // Random breakpoints along the root path.
      std::vector<PathSegment> segs{{from, std::uniform_int_distribution<int>(-3, 30)(rng)}};
      for (std::size_t s = 1; s < path.size(); ++s) {
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
          segs.push_back({path[s], std::uniform_int_distribution<int>(-3, 30)(rng)});
        }
      }
      std::size_t seg = 0;
      for (NodeId a : path) {
        if (seg + 1 < segs.size() && segs[seg + 1].bottom == a) ++seg;
        shadow[a] = std::max(shadow[a], segs[seg].value);
      }
      p.path_update(from, segs);
      const NodeId probe = std::uniform_int_distribution<int>(1, n)(rng);
      ASSERT_EQ(p.query(probe), shadow[probe]);
    }
    for (NodeId v = 1; v <= n; ++v) ASSERT_EQ(p.query(v), shadow[v]);
  }
}

}  // namespace
}  // namespace ted
