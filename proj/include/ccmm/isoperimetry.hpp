#pragma once

#include <span>
#include <string>
#include <vector>

#include "ccmm/lipschitz.hpp"
#include "ccmm/quasimetric.hpp"

namespace ccmm {

/// Finite-difference boundary measures at a declared scale.
struct MinkowskiContent {
  double forward = 0.0;
  double backward = 0.0;
  double scale = 0.0;
};

/// (mu(B+-(E, scale)) - mu(E)) / scale. A full E has content 0.
MinkowskiContent minkowski_content(const MetricMeasureSpace& mm, const PointSet& E, double scale);

struct IsoperimetricPoint {
  double mass;
  double content;  ///< min over the scanned sets of min(forward, backward)
};

/// Profile at every achievable mass (Exact, n <= 16) or at the masses of the
/// nested forward/backward balls and the family's sublevel sets (Family).
std::vector<IsoperimetricPoint> isoperimetric_profile(const MetricMeasureSpace& mm, double scale,
                                                      Strategy strategy,
                                                      const LipschitzFamily* family = nullptr);

// Standard normal distribution.
double gaussian_phi(double t);
/// 1 - gaussian_phi(t), integrated directly in the upper tail.
double gaussian_tail(double t);
double gaussian_phi_prime(double t);
/// Inverse of gaussian_phi on (0, 1).
double gaussian_phi_inv(double v);

struct Lemma51Report {
  Strategy strategy = Strategy::Exact;
  double scale = 0.0;
  double K = 1.0;
  bool hypothesis_holds = true;
  double hypothesis_worst_margin = 0.0;  ///< min of I(E) - sqrt(K) phi'(phi^-1(mu(E)))
  bool asserted = false;                 ///< conclusion checked only under the hypothesis
  bool holds = true;
  double worst_margin = 0.0;  ///< min of phi_K^-1(mu(B)) - phi_K^-1(mu(E)) - r + scale
  std::size_t sets_checked = 0;
  std::string witness;
};

/// Lemma-5.1 style enlargement check with phi_K(t) = phi(sqrt(K) t). The
/// comparison hypothesis is measured on the scanned sets; the conclusion is
/// asserted with one scale of slack only when it holds.
Lemma51Report lemma51_check(const MetricMeasureSpace& mm, double scale, std::span<const double> r_grid,
                            double K = 1.0);

/// 1 - phi(phi^-1(1/2) + sqrt(K) r) = 1 - phi(sqrt(K) r).
double lemma52_bound(double r, double K = 1.0);
/// (1/2) exp(-K r^2 / 2).
double thm54_bound(double K, double r);
/// 2 sqrt((2/K) log(1/eps)).
double cor55_bound(double K, double epsilon);

}  // namespace ccmm
