#include "ccmm/lipschitz.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace ccmm {

std::string to_string(FieldOrigin origin) {
  switch (origin) {
    case FieldOrigin::DistanceFromPoint: return "distance-to-point";
    case FieldOrigin::NegativeDistanceToPoint: return "negative-distance-from-point";
    case FieldOrigin::InfConvolution: return "inf-convolution";
    case FieldOrigin::User: return "user";
  }
  return "user";
}

FieldOrigin field_origin_from_string(const std::string& s) {
  if (s == "distance-to-point") return FieldOrigin::DistanceFromPoint;
  if (s == "negative-distance-from-point") return FieldOrigin::NegativeDistanceToPoint;
  if (s == "inf-convolution") return FieldOrigin::InfConvolution;
  if (s == "user") return FieldOrigin::User;
  throw Error("unknown field origin '" + s + "'");
}

LipschitzFamily::LipschitzFamily(const QuasiMetricSpace& space, std::vector<Member> members)
    : members_(std::move(members)) {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const auto& f = members_[i].values;
    if (f.size() != space.size()) {
      throw Error("family member " + std::to_string(i) + " has " + std::to_string(f.size()) +
                  " values, space has " + std::to_string(space.size()) + " points");
    }
    for (double v : f)
      if (!std::isfinite(v)) throw Error("family member " + std::to_string(i) + " is not finite");
    if (!is_lipschitz(space, f, 1.0)) {
      throw Error("family member " + std::to_string(i) + " is not 1-Lipschitz (constant " +
                  std::to_string(lipschitz_constant(space, f)) + ")");
    }
  }
}

double lipschitz_constant(const QuasiMetricSpace& space, std::span<const double> f) {
  const std::size_t n = space.size();
  if (f.size() != n) throw Error("field length does not match the space");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < n; ++x) {
    const auto row = space.row(x);
    for (std::size_t z = 0; z < n; ++z)
      if (z != x) best = std::max(best, (f[z] - f[x]) / row[z]);
  }
  return n < 2 ? 0.0 : best;
}

bool is_lipschitz(const QuasiMetricSpace& space, std::span<const double> f, double L,
                  double tolerance) {
  return lipschitz_constant(space, f) <= L + tolerance;
}

double median(const ProbabilityMeasure& measure, std::span<const double> f) {
  const std::size_t n = measure.size();
  if (f.size() != n) throw Error("field length does not match the measure");
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return f[a] < f[b]; });

  // Walk the distinct values in ascending order; below = mu(f < v), at = mu(f == v).
  double below = 0.0;
  for (std::size_t i = 0; i < n;) {
    const double v = f[order[i]];
    double at = 0.0;
    std::size_t j = i;
    while (j < n && f[order[j]] == v) at += measure[order[j++]];
    const double le = below + at;
    const double ge = 1.0 - below;
    if (le >= 0.5 - kMassTolerance && ge >= 0.5 - kMassTolerance) return v;
    below = le;
    i = j;
  }
  return f[order.back()];
}

double mean(const ProbabilityMeasure& measure, std::span<const double> f) {
  if (f.size() != measure.size()) throw Error("field length does not match the measure");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += measure[i] * f[i];
  return s;
}

ScalarField inf_convolution(const QuasiMetricSpace& space, std::span<const double> g) {
  const std::size_t n = space.size();
  if (g.size() != n) throw Error("field length does not match the space");
  ScalarField f(n, std::numeric_limits<double>::infinity());
  for (std::size_t z = 0; z < n; ++z) {
    const auto row = space.row(z);
    for (std::size_t x = 0; x < n; ++x) f[x] = std::min(f[x], g[z] + row[x]);
  }
  return f;
}

ScalarField distance_from_point(const QuasiMetricSpace& space, Index p) {
  const auto row = space.row(p);
  return ScalarField(row.begin(), row.end());
}

ScalarField negative_distance_to_point(const QuasiMetricSpace& space, Index p) {
  ScalarField f(space.size());
  for (std::size_t x = 0; x < space.size(); ++x) f[x] = -space(x, p);
  return f;
}

LipschitzFamily generate_family(const MetricMeasureSpace& mm, std::size_t count,
                                std::uint64_t seed) {
  const QuasiMetricSpace& space = mm.space;
  const std::size_t n = space.size();
  if (count < 2 * n) {
    throw Error("family size " + std::to_string(count) + " is below 2n = " + std::to_string(2 * n));
  }
  std::vector<LipschitzFamily::Member> members;
  members.reserve(count);
  for (Index p = 0; p < n; ++p)
    members.push_back({distance_from_point(space, p), FieldOrigin::DistanceFromPoint, p});
  for (Index p = 0; p < n; ++p)
    members.push_back({negative_distance_to_point(space, p), FieldOrigin::NegativeDistanceToPoint, p});

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amplitude(0.0, diameter(space));
  ScalarField g(n);
  while (members.size() < count) {
    for (double& v : g) v = amplitude(rng);
    members.push_back({inf_convolution(space, g), FieldOrigin::InfConvolution, 0});
  }
  return LipschitzFamily(space, std::move(members));
}

}  // namespace ccmm
