#include <gtest/gtest.h>

#include <random>

#include "ccmm/quasimetric.hpp"
#include "test_support.hpp"

using namespace ccmm;
using ccmm::testing::floyd_warshall;

TEST(Validate, AcceptsTwoPointSpaces) {
  EXPECT_TRUE(validate({{0, 1}, {1, 0}}).valid);
  EXPECT_TRUE(validate({{0, 1}, {2, 0}}).valid);
}

TEST(Validate, ReportsTriangleViolation) {
  const auto r = validate({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
  ASSERT_FALSE(r.valid);
  ASSERT_FALSE(r.triangles.empty());
  const auto& t = r.triangles.front();
  EXPECT_EQ(t.i, 0u);
  EXPECT_EQ(t.j, 1u);
  EXPECT_EQ(t.k, 2u);
  EXPECT_DOUBLE_EQ(t.excess, 3.0);
}

TEST(Validate, RejectsDiagonalAndZeroDistances) {
  EXPECT_FALSE(validate({{1, 1}, {1, 0}}).valid);
  EXPECT_FALSE(validate({{0, 0}, {1, 0}}).valid);
  EXPECT_THROW(validate({{0, 1}}), Error);
  EXPECT_THROW(validate({{0, std::nan("")}, {1, 0}}), Error);
}

TEST(Validate, SampledModeFindsDenseViolations) {
  // d(0, odd) = 5 > d(0, even) + d(even, odd) = 2 for every even middle point.
  const std::size_t n = 30;
  DistanceMatrix d(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (std::size_t j = 1; j < n; j += 2) d[0][j] = 5.0;
  ValidateOptions opt;
  opt.sampled = true;
  EXPECT_FALSE(validate(d, opt).valid);
  EXPECT_THROW(QuasiMetricSpace::from_matrix(d), Error);
}

TEST(FromDigraph, DirectedThreeCycle) {
  const std::vector<Edge> e{{0, 1, 1}, {1, 2, 1}, {2, 0, 1}};
  const auto s = from_digraph(3, e);
  EXPECT_DOUBLE_EQ(s(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(s(1, 0), 2.0);
}

TEST(FromDigraph, CompleteAndTwoNode) {
  std::vector<Edge> e;
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j)
      if (i != j) e.push_back({i, j, 1.0});
  const auto s = from_digraph(4, e);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(s(i, j), i == j ? 0.0 : 1.0);
  const std::vector<Edge> two{{0, 1, 1}, {1, 0, 3}};
  EXPECT_EQ(from_digraph(2, two).matrix(), (DistanceMatrix{{0, 1}, {3, 0}}));
}

TEST(FromDigraph, MatchesFloydWarshallAndValidatesExactly) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> w(0.1, 3.0), coin(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 5 + trial % 20;
    std::vector<Edge> e;
    for (Index i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, w(rng)});
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (i != j && coin(rng) < 0.3) e.push_back({i, j, w(rng)});
    const auto s = from_digraph(n, e);
    const auto oracle = floyd_warshall(n, e);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) EXPECT_NEAR(s(i, j), oracle[i][j], 1e-12 * (1 + oracle[i][j]));
    EXPECT_TRUE(validate(s.matrix()).valid);
  }
}

TEST(FromDigraph, Errors) {
  const std::vector<Edge> one_way{{0, 1, 1}};
  EXPECT_THROW(from_digraph(2, one_way), Error);
  const std::vector<Edge> bad{{0, 1, -1}, {1, 0, 1}};
  EXPECT_THROW(from_digraph(2, bad), Error);
  const std::vector<Edge> out{{0, 5, 1}};
  EXPECT_THROW(from_digraph(2, out), Error);
}

TEST(Neighborhoods, StrictBalls) {
  const auto sym = QuasiMetricSpace::from_matrix({{0, 1}, {1, 0}});
  const auto A = PointSet::of({0}, 2);
  EXPECT_EQ(forward_neighborhood(sym, A, 1.0), A);
  EXPECT_EQ(forward_neighborhood(sym, A, 1.5), PointSet::all(2));

  const auto asym = QuasiMetricSpace::from_matrix({{0, 1}, {3, 0}});
  const auto B = PointSet::of({1}, 2);
  EXPECT_EQ(forward_neighborhood(asym, B, 2.0), B);
  EXPECT_EQ(backward_neighborhood(asym, B, 2.0), PointSet::all(2));
  EXPECT_EQ(backward_neighborhood(asym, PointSet::all(2), 0.1), PointSet::all(2));
}

TEST(Neighborhoods, ReverseSwapsDirectionsAndNests) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto mm = ccmm::testing::suite_space(seed);
    const auto& s = mm.space;
    const auto rs = reverse(s);
    EXPECT_EQ(reverse(rs).matrix(), s.matrix());
    const std::size_t n = s.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); mask += 7) {
      const auto A = PointSet::from_mask(mask, n);
      for (double r : {0.2, 0.7, 1.3, 2.9}) {
        EXPECT_EQ(forward_neighborhood(rs, A, r), backward_neighborhood(s, A, r));
        const auto small = forward_neighborhood(s, A, r);
        const auto big = forward_neighborhood(s, A, r + 0.5);
        for (Index x : small) EXPECT_TRUE(big.contains(x));
      }
    }
  }
}

TEST(Neighborhoods, SymmetricSpaceDirectionsAgree) {
  const auto mm = ccmm::testing::cycle(9, 9.0);
  for (std::uint64_t mask = 1; mask < 512; mask += 13) {
    const auto A = PointSet::from_mask(mask, 9);
    for (double r : {0.5, 1.5, 2.5})
      EXPECT_EQ(forward_neighborhood(mm.space, A, r), backward_neighborhood(mm.space, A, r));
  }
}

TEST(Reverse, TwoPoint) {
  const auto s = QuasiMetricSpace::from_matrix({{0, 1}, {3, 0}});
  EXPECT_EQ(reverse(s).matrix(), (DistanceMatrix{{0, 3}, {1, 0}}));
}

TEST(Diameter, Examples) {
  const auto s = QuasiMetricSpace::from_matrix({{0, 1}, {3, 0}});
  EXPECT_DOUBLE_EQ(diameter(s, PointSet::of({1}, 2)), 0.0);
  EXPECT_DOUBLE_EQ(diameter(s), 3.0);
  const auto unit = ccmm::testing::space_from({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  EXPECT_DOUBLE_EQ(diameter(unit.space), 1.0);
}

TEST(Measure, NormalizationAndErrors) {
  const auto m = ProbabilityMeasure::normalized({1, 3});
  EXPECT_DOUBLE_EQ(m[0], 0.25);
  EXPECT_THROW(ProbabilityMeasure({0.5, 0.6}), Error);
  EXPECT_THROW(ProbabilityMeasure({-0.5, 1.5}), Error);
  EXPECT_THROW(ProbabilityMeasure::normalized({0, 0}), Error);
}

TEST(Space, ScalingAndSymmetry) {
  const auto mm = ccmm::testing::suite_space(3);
  const auto s2 = mm.space.scaled(2.0);
  for (Index i = 0; i < mm.size(); ++i)
    for (Index j = 0; j < mm.size(); ++j) EXPECT_DOUBLE_EQ(s2(i, j), 2.0 * mm.space(i, j));
  EXPECT_FALSE(mm.space.is_symmetric());
  EXPECT_TRUE(ccmm::testing::cycle(6, 6.0).space.is_symmetric());
  EXPECT_DOUBLE_EQ(ccmm::testing::path(4).space.mesh_step(), 1.0);
}

TEST(RandomSpace, DeterministicAndValid) {
  const auto a = random_space(9, 42), b = random_space(9, 42);
  EXPECT_EQ(a.space.matrix(), b.space.matrix());
  EXPECT_EQ(a.measure.weights(), b.measure.weights());
  EXPECT_TRUE(validate(a.space.matrix()).valid);
}
