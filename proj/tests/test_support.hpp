#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "ccmm/quasimetric.hpp"

namespace ccmm::testing {

MetricMeasureSpace space_from(const DistanceMatrix& dist, std::vector<double> weights = {});
MetricMeasureSpace two_point(double d01 = 1.0, double d10 = 1.0, double w0 = 0.5);
/// Symmetric cycle with n equally spaced points on a circle of the given length.
MetricMeasureSpace cycle(std::size_t n, double circumference);
/// {x : d(x0, x) <= median}; mass >= 1/2.
PointSet median_sublevel(const MetricMeasureSpace& mm);
/// Unit path 0 - 1 - ... - (n-1), uniform.
MetricMeasureSpace path(std::size_t n);

/// Random irreversible suite space: n = 3 + seed % 10, random digraph metric
/// and random measure.
MetricMeasureSpace suite_space(std::uint64_t seed);

// Oracles written straight from the definitions, no shared code paths.

DistanceMatrix floyd_warshall(std::size_t n, const std::vector<Edge>& edges);
/// Strict balls with the library tie rule; brute force over all subsets.
double brute_alpha(const MetricMeasureSpace& mm, double r);
double brute_partial_diameter(const MetricMeasureSpace& mm, double kappa);
/// Shortest [a, b] with a, b values of f and mass >= 1 - kappa, by all pairs.
double brute_pushforward_partial_diameter(const std::vector<double>& weights,
                                          const std::vector<double>& f, double kappa);
/// sup_x limsup (f(y) - f(x))_+ / d(x, y) over y, written as a plain loop.
std::vector<double> brute_ascending_slopes(const MetricMeasureSpace& mm, const std::vector<double>& f);

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace ccmm::testing
