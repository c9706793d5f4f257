#include <gtest/gtest.h>

#include "ccmm/lipschitz.hpp"
#include "test_support.hpp"

using namespace ccmm;

TEST(Lipschitz, Examples) {
  const auto s = QuasiMetricSpace::from_matrix({{0, 1}, {3, 0}});
  const std::vector<double> f{0, 2};
  EXPECT_DOUBLE_EQ(lipschitz_constant(s, f), 2.0);
  const std::vector<double> c{4, 4};
  EXPECT_DOUBLE_EQ(lipschitz_constant(s, c), 0.0);
}

TEST(Lipschitz, DistanceFieldsAreOneLipschitz) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto mm = ccmm::testing::suite_space(seed);
    for (Index p = 0; p < mm.size(); ++p) {
      EXPECT_LE(lipschitz_constant(mm.space, distance_from_point(mm.space, p)), 1.0 + 1e-12);
      EXPECT_LE(lipschitz_constant(mm.space, negative_distance_to_point(mm.space, p)), 1.0 + 1e-12);
    }
  }
}

TEST(Median, Examples) {
  const auto u2 = ProbabilityMeasure::uniform(2);
  EXPECT_DOUBLE_EQ(median(u2, std::vector<double>{0, 10}), 0.0);
  EXPECT_DOUBLE_EQ(median(ProbabilityMeasure({0, 1, 0}), std::vector<double>{5, 7, 9}), 7.0);
  EXPECT_DOUBLE_EQ(median(ProbabilityMeasure::uniform(3), std::vector<double>{3, 1, 2}), 2.0);
}

TEST(Median, SatisfiesBothHalfMassConditions) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto mm = ccmm::testing::suite_space(seed);
    const auto f = distance_from_point(mm.space, seed % mm.size());
    const double m = median(mm.measure, f);
    double le = 0, ge = 0;
    for (Index x = 0; x < mm.size(); ++x) {
      if (f[x] <= m) le += mm.measure[x];
      if (f[x] >= m) ge += mm.measure[x];
    }
    EXPECT_GE(le, 0.5 - 1e-12);
    EXPECT_GE(ge, 0.5 - 1e-12);
  }
}

TEST(Mean, Examples) {
  EXPECT_DOUBLE_EQ(mean(ProbabilityMeasure::uniform(2), std::vector<double>{0, 10}), 5.0);
  EXPECT_DOUBLE_EQ(mean(ProbabilityMeasure({1, 0}), std::vector<double>{7, 3}), 7.0);
  EXPECT_DOUBLE_EQ(mean(ProbabilityMeasure({0.25, 0.75}), std::vector<double>{0, 4}), 3.0);
}

TEST(InfConvolution, FixesLipschitzAndRecoversDistance) {
  const auto mm = ccmm::testing::suite_space(5);
  const auto& s = mm.space;
  const auto d0 = distance_from_point(s, 0);
  const auto same = inf_convolution(s, d0);
  for (Index x = 0; x < s.size(); ++x) EXPECT_DOUBLE_EQ(same[x], d0[x]);

  std::vector<double> spike(s.size(), 1e6);
  spike[2] = 0.0;
  const auto f = inf_convolution(s, spike);
  for (Index x = 0; x < s.size(); ++x) EXPECT_DOUBLE_EQ(f[x], s(2, x));

  std::vector<double> wild{5, -3, 8, 0, 2, 9, -7, 1};
  wild.resize(s.size(), 4.0);
  EXPECT_LE(lipschitz_constant(s, inf_convolution(s, wild)), 1.0 + 1e-10);
}

TEST(Family, SizeDeterminismAndCertificates) {
  const auto mm = ccmm::testing::suite_space(7);
  const std::size_t n = mm.size();
  const auto exact = generate_family(mm, 2 * n, 1);
  ASSERT_EQ(exact.size(), 2 * n);
  for (Index p = 0; p < n; ++p) {
    EXPECT_EQ(exact[p].origin, FieldOrigin::DistanceFromPoint);
    EXPECT_EQ(exact[n + p].origin, FieldOrigin::NegativeDistanceToPoint);
  }
  const auto a = generate_family(mm, 2 * n + 10, 9), b = generate_family(mm, 2 * n + 10, 9);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].values, b[i].values);
    EXPECT_TRUE(is_lipschitz(mm.space, a[i].values, 1.0));
  }
  EXPECT_THROW(generate_family(mm, n, 0), Error);
}

TEST(Family, RejectsNonLipschitzMember) {
  const auto mm = ccmm::testing::two_point();
  EXPECT_THROW(LipschitzFamily(mm.space, {{{0.0, 3.0}, FieldOrigin::User, 0}}), Error);
  EXPECT_THROW(LipschitzFamily(mm.space, {{{0.0}, FieldOrigin::User, 0}}), Error);
}

TEST(FieldOrigin, RoundTrip) {
  for (auto o : {FieldOrigin::DistanceFromPoint, FieldOrigin::NegativeDistanceToPoint,
                 FieldOrigin::InfConvolution, FieldOrigin::User})
    EXPECT_EQ(field_origin_from_string(to_string(o)), o);
  EXPECT_THROW(field_origin_from_string("nope"), Error);
}
