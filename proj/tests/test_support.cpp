#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ccmm/lipschitz.hpp"

namespace ccmm::testing {

MetricMeasureSpace space_from(const DistanceMatrix& dist, std::vector<double> weights) {
  auto space = QuasiMetricSpace::from_matrix(dist);
  if (weights.empty()) return MetricMeasureSpace(space, ProbabilityMeasure::uniform(dist.size()));
  return MetricMeasureSpace(space, ProbabilityMeasure::normalized(std::move(weights)));
}

MetricMeasureSpace two_point(double d01, double d10, double w0) {
  return space_from({{0.0, d01}, {d10, 0.0}}, {w0, 1.0 - w0});
}

MetricMeasureSpace cycle(std::size_t n, double circumference) {
  const double h = circumference / static_cast<double>(n);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    edges.push_back({i, (i + 1) % n, h});
    edges.push_back({(i + 1) % n, i, h});
  }
  return MetricMeasureSpace(from_digraph(n, edges), ProbabilityMeasure::uniform(n));
}

PointSet median_sublevel(const MetricMeasureSpace& mm) {
  const auto f = distance_from_point(mm.space, 0);
  const double m = median(mm.measure, f);
  std::vector<Index> members;
  for (Index x = 0; x < mm.size(); ++x)
    if (f[x] <= m) members.push_back(x);
  return PointSet::of(members, mm.size());
}

MetricMeasureSpace path(std::size_t n) {
  DistanceMatrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i][j] = std::abs(static_cast<double>(i) - static_cast<double>(j));
  return space_from(d);
}

MetricMeasureSpace suite_space(std::uint64_t seed) { return random_space(3 + seed % 10, seed); }

DistanceMatrix floyd_warshall(std::size_t n, const std::vector<Edge>& edges) {
  const double inf = std::numeric_limits<double>::infinity();
  DistanceMatrix d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const Edge& e : edges) d[e.from][e.to] = std::min(d[e.from][e.to], e.weight);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

namespace {

bool in_ball(double dist, double r) { return dist < r - 1e-12 * std::max(1.0, r); }

}  // namespace

double brute_alpha(const MetricMeasureSpace& mm, double r) {
  const std::size_t n = mm.size();
  double best = 0.0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) a += mm.measure[i];
    if (a < 0.5 - 1e-12) continue;
    double fwd = 0.0, bwd = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      bool f = false, b = false;
      for (std::size_t z = 0; z < n; ++z) {
        if (!(mask >> z & 1)) continue;
        f = f || in_ball(mm.space(z, x), r);
        b = b || in_ball(mm.space(x, z), r);
      }
      if (f) fwd += mm.measure[x];
      if (b) bwd += mm.measure[x];
    }
    best = std::max(best, 1.0 - std::min(fwd, bwd));
  }
  return std::max(0.0, best);
}

double brute_partial_diameter(const MetricMeasureSpace& mm, double kappa) {
  const std::size_t n = mm.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    double a = 0.0, diam = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1)) continue;
      a += mm.measure[i];
      for (std::size_t j = 0; j < n; ++j)
        if (mask >> j & 1) diam = std::max(diam, mm.space(i, j));
    }
    if (a >= 1.0 - kappa - 1e-12) best = std::min(best, diam);
  }
  return best;
}

double brute_pushforward_partial_diameter(const std::vector<double>& weights, const std::vector<double>& f,
                                          double kappa) {
  double best = std::numeric_limits<double>::infinity();
  for (double lo : f)
    for (double hi : f) {
      if (hi < lo) continue;
      double m = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] >= lo && f[i] <= hi) m += weights[i];
      if (m >= 1.0 - kappa - 1e-12) best = std::min(best, hi - lo);
    }
  return best;
}

std::vector<double> brute_ascending_slopes(const MetricMeasureSpace& mm, const std::vector<double>& f) {
  std::vector<double> s(mm.size(), 0.0);
  for (std::size_t x = 0; x < mm.size(); ++x)
    for (std::size_t y = 0; y < mm.size(); ++y)
      if (y != x) s[x] = std::max(s[x], (f[y] - f[x]) / mm.space(x, y));
  return s;
}

}  // namespace ccmm::testing
