#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccmm/quasimetric.hpp"

namespace ccmm {

/// One real value per point.
using ScalarField = std::vector<double>;

enum class FieldOrigin { DistanceFromPoint, NegativeDistanceToPoint, InfConvolution, User };

std::string to_string(FieldOrigin origin);
FieldOrigin field_origin_from_string(const std::string& s);

/// 1-Lipschitz test functions. Members are certified on construction.
class LipschitzFamily {
 public:
  struct Member {
    ScalarField values;
    FieldOrigin origin;
    Index anchor = 0;  ///< point p for the distance fields
  };

  LipschitzFamily() = default;
  /// Throws Error if any member fails is_lipschitz(space, f, 1).
  LipschitzFamily(const QuasiMetricSpace& space, std::vector<Member> members);

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const Member& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<Member>& members() const { return members_; }

 private:
  std::vector<Member> members_;
};

/// max over ordered pairs x != z of (f(z) - f(x)) / d(x,z). Order matters.
double lipschitz_constant(const QuasiMetricSpace& space, std::span<const double> f);

bool is_lipschitz(const QuasiMetricSpace& space, std::span<const double> f, double L,
                  double tolerance = kLipschitzTolerance);

/// Lower median: the smallest attained value m with mu(f <= m) >= 1/2 and
/// mu(f >= m) >= 1/2.
double median(const ProbabilityMeasure& measure, std::span<const double> f);

double mean(const ProbabilityMeasure& measure, std::span<const double> f);

/// x -> min_z g(z) + d(z,x). The result satisfies f(z) <= f(x) + d(x,z).
ScalarField inf_convolution(const QuasiMetricSpace& space, std::span<const double> g);

ScalarField distance_from_point(const QuasiMetricSpace& space, Index p);           // d(p, .)
ScalarField negative_distance_to_point(const QuasiMetricSpace& space, Index p);    // -d(., p)

/// The 2n distance fields followed by (count - 2n) inf-convolutions of
/// uniform random fields on [0, diameter]. Deterministic in seed.
LipschitzFamily generate_family(const MetricMeasureSpace& mm, std::size_t count,
                                std::uint64_t seed);

}  // namespace ccmm
