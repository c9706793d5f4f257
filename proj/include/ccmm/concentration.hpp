#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccmm/lipschitz.hpp"
#include "ccmm/quasimetric.hpp"

namespace ccmm {

struct ProfilePoint {
  double r;
  double alpha;
};

/// Sampled concentration function. alpha is a right-continuous-from-the-left
/// step function on a finite space: constant on (d_{k-1}, d_k] between
/// consecutive attained distances, zero beyond the diameter.
struct ConcentrationProfile {
  std::vector<ProfilePoint> points;  ///< ascending r
  Strategy strategy = Strategy::Exact;
  std::size_t exact_threshold = kExactLimit;
  std::vector<double> distances;  ///< attained distances d_1 < ... < d_m
  double delta = 0.0;             ///< offset used for the right-hand samples

  /// alpha(r) for any r > 0, read off the step structure.
  double value_at(double r) const;
  double diameter() const { return distances.empty() ? 0.0 : distances.back(); }
};

/// Candidate-set options for the Family strategy.
struct FamilyOptions {
  std::size_t count = 0;  ///< 0: 2n + 32
  std::uint64_t seed = 0;
};

std::size_t default_family_count(std::size_t n);

/// 1 - min(mu(B+(A,r)), mu(B-(A,r))) maximized over half-mass sets A.
/// Exact enumerates subsets (n <= 16); Family returns a lower bound.
double alpha(const MetricMeasureSpace& mm, double r, Strategy strategy,
             const FamilyOptions& options = {});

ConcentrationProfile alpha_profile(const MetricMeasureSpace& mm, Strategy strategy,
                                   const FamilyOptions& options = {});
/// Family strategy with an explicit family.
ConcentrationProfile alpha_profile(const MetricMeasureSpace& mm, const LipschitzFamily& family);

/// The half-mass sets searched by the Family strategy: minimal forward and
/// backward balls about each point, and {f <= m_f}, {f >= m_f} per member.
std::vector<PointSet> family_candidate_sets(const MetricMeasureSpace& mm,
                                            const LipschitzFamily& family);

// ---------------------------------------------------------------------------
// Deviation inequalities

struct InequalityResult {
  bool holds = true;
  double worst_margin = 0.0;  ///< min over checks of (right - left); >= 0 when holding
  double worst_r = 0.0;
};

struct DeviationReport {
  double lipschitz = 0.0;  ///< L used (max(Lip f, eps))
  double median = 0.0;
  InequalityResult upper;     ///< mu(f >= m + r) <= alpha(r/L)
  InequalityResult lower;     ///< mu(f <= m - r) <= alpha(r/L)
  InequalityResult two_sided; ///< mu(|f - m| >= r) <= 2 alpha(r/L)
  bool all_hold() const { return upper.holds && lower.holds && two_sided.holds; }
};

/// Requires an Exact profile (a Family lower bound cannot certify the
/// right-hand sides).
DeviationReport deviation_check(const MetricMeasureSpace& mm, std::span<const double> f,
                                const ConcentrationProfile& profile);

/// mu(|f - center| >= t), with a 1e-10 relative band at the threshold.
double deviation_tail(const ProbabilityMeasure& measure, std::span<const double> f, double center,
                      double t);

// ---------------------------------------------------------------------------
// Moments and tails

/// (sum mu_x |f(x) - mean|^q)^(1/q), q >= 1.
double moment_norm(const MetricMeasureSpace& mm, std::span<const double> f, double q);

struct MomentReport {
  bool holds = true;
  double largest_C = 0.0;  ///< q / max_f norm^p; +inf for a constant-only family
  std::size_t worst_member = 0;
};

/// ||f - mean||_q^p <= q / C for every member.
MomentReport check_moment_concentration(const MetricMeasureSpace& mm,
                                        const LipschitzFamily& family, double p, double q,
                                        double C);

/// Certified lower bound of inf_{q >= 1} q / ||f - mean||_q^p (grid plus an
/// L-infinity tail argument; the norm is nondecreasing in q).
double moment_concentration_constant(const MetricMeasureSpace& mm, std::span<const double> f,
                                     double p);

struct TailDecayReport {
  bool holds = true;
  double worst_margin = 0.0;
  double worst_r = 0.0;
  std::size_t worst_member = 0;
};

/// mu(|f - mean| >= r) <= 1 / (C r) for members and grid points.
TailDecayReport check_linear_tail_decay(const MetricMeasureSpace& mm,
                                        const LipschitzFamily& family, double C,
                                        std::span<const double> r_grid);

// ---------------------------------------------------------------------------
// Mean-versus-median enlargement

/// Non-increasing tail bound beta on (0, inf).
using TailFunction = std::function<double(double)>;

/// Step function E(r) = max{ m : (v, m) recorded with v >= r - band(r) }.
/// Built from (level, tail mass) samples of test fields.
class TailEnvelope {
 public:
  void add(double level, double tail_mass);
  /// Records every distinct deviation level of f about its mean.
  void add_field(const ProbabilityMeasure& measure, std::span<const double> f);
  void merge(const TailEnvelope& other);
  double operator()(double r) const;
  std::size_t size() const;

 private:
  void compact() const;
  mutable std::vector<std::pair<double, double>> samples_;  // (level, mass)
  mutable bool compacted_ = true;
};

struct Prop32Part1Report {
  bool hypothesis_holds = true;
  /// The hypothesis is checked on finitely many fields (family members and
  /// the enlargement test fields), so a pass is necessary, not sufficient.
  bool hypothesis_necessary_only = true;
  bool conclusions_hold = true;
  bool passed() const { return !hypothesis_holds || conclusions_hold; }
  double worst_hypothesis_margin = 0.0;
  double worst_enlargement_margin = 0.0;
  double worst_alpha_margin = 0.0;
  std::size_t subsets_checked = 0;
  std::string witness;
};

/// Checks 1 - mu(B+-(A,r)) <= beta(mu(A) r) for every subset A with mu(A) > 0
/// and alpha(r) <= beta(r/2), provided the measured hypothesis
/// mu(|f - mean| >= r) <= beta(r) holds on the family and on the truncated
/// set-distance fields min(d(A,.), r), max(-d(.,A), -r). Needs n <= 16.
Prop32Part1Report prop32_part1_check(const MetricMeasureSpace& mm, const TailFunction& beta,
                                     const LipschitzFamily& family,
                                     const ConcentrationProfile& exact_profile);

/// Tail envelope over the family and every truncated set-distance field at
/// the levels the enlargement argument evaluates. n <= 16.
TailEnvelope exact_tail_envelope(const MetricMeasureSpace& mm, const LipschitzFamily& family);

struct Prop32Constants {
  double C_prime;  ///< max(C,1) exp(c_p^p C^p)
  double kappa;    ///< min(1, 2^(1-p))
  double c_p;      ///< Gamma(1/p + 1)
};

Prop32Constants prop32_part2_constants(double C, double c, double p);

enum class Thm33Direction { Forward, Backward };

struct Thm33Constants {
  double C;
  double c;
};

/// Forward: normal concentration (C, c) -> mean-deviation tail constants
/// (max(2C,1) e^{pi C^2}, c/2). Backward: (C', c') -> (C', c'/4).
Thm33Constants thm33_constants(Thm33Direction direction, double C, double c);

/// sqrt(2 pi) C' e^{1/(4e) - 1/2} sqrt(q / c').
double thm37_moment_bound(double C_prime, double c_prime, double q);

enum class TailRegime { Normal, Linear };

struct TailBound {
  TailRegime regime;
  double bound;
};

/// Optimized Chebyshev bound from (2,q)-moment concentration with constant C.
TailBound thm38_tail_from_moment(double C, double r);

/// 1 / (C^{1/p} r).
double thm39_tail_from_first_moment(double C, double p, double r);

// ---------------------------------------------------------------------------
// Profile fits

enum class FitModel { Normal, Exponential };

std::string to_string(FitModel model);

struct ProfileFit {
  FitModel model = FitModel::Normal;
  double C = 0.5;
  double c = 1.0;
  bool certified = false;
  bool degenerate = false;

  double power() const { return model == FitModel::Normal ? 2.0 : 1.0; }
  double operator()(double r) const;
};

/// Least squares on log alpha against r^p, then C inflated to dominate
/// every breakpoint.
ProfileFit fit_profile(const ConcentrationProfile& profile, FitModel model);

}  // namespace ccmm
