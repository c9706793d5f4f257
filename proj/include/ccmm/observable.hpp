#pragma once

#include <span>
#include <string>
#include <vector>

#include "ccmm/concentration.hpp"
#include "ccmm/lipschitz.hpp"
#include "ccmm/quasimetric.hpp"

namespace ccmm {

struct PartialDiameter {
  double value = 0.0;
  bool exact = true;  ///< false: heuristic upper bound (n > 16)
  PointSet witness;
};

/// min diam(A) over subsets with mu(A) >= 1 - kappa. Exact by enumeration for
/// n <= 16, otherwise balls plus greedy point removal.
PartialDiameter partial_diameter(const MetricMeasureSpace& mm, double kappa);

/// Shortest closed interval carrying f_* mu mass >= 1 - kappa.
double pushforward_partial_diameter(const ProbabilityMeasure& measure, std::span<const double> f,
                                    double kappa);

struct ObsDiamResult {
  double kappa = 0.0;
  double value = 0.0;  ///< lower bound of the sup over all 1-Lipschitz f
  std::size_t witness = 0;
  std::size_t family_size = 0;
};

ObsDiamResult observable_diameter(const MetricMeasureSpace& mm, double kappa,
                                  const LipschitzFamily& family);

/// inf{r > 0 : alpha(r) <= epsilon} read off the step profile.
double alpha_inverse(const ConcentrationProfile& profile, double epsilon);

struct Thm41Entry {
  double epsilon = 0.0;
  double obsdiam = 0.0;
  double bound = 0.0;  ///< 2 alpha^{-1}(epsilon / 2)
  std::size_t witness = 0;
  bool holds = true;
};

struct Thm41Report {
  bool holds = true;
  bool necessary_only = true;  ///< the left side is a family lower bound
  double worst_margin = 0.0;
  std::vector<Thm41Entry> entries;
};

Thm41Report thm41_check(const MetricMeasureSpace& mm, std::span<const double> epsilons,
                        const LipschitzFamily& family, const ConcentrationProfile& exact_profile);
/// Computes the exact profile itself (n <= 16).
Thm41Report thm41_check(const MetricMeasureSpace& mm, std::span<const double> epsilons,
                        const LipschitzFamily& family);

/// 2 sqrt(log(2C/eps) / c), clamped at 0.
double obsdiam_bound_normal(double C, double c, double epsilon);
/// (2/c) log(2C/eps), clamped at 0.
double obsdiam_bound_exponential(double C, double c, double epsilon);

}  // namespace ccmm
