#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccmm/lipschitz.hpp"
#include "ccmm/quasimetric.hpp"

namespace ccmm {

/// max over z != x of max(f(z) - f(x), 0) / d(x, z).
double dual_slope(const MetricMeasureSpace& mm, std::span<const double> f, Index x);
std::vector<double> ascending_slopes(const QuasiMetricSpace& space, std::span<const double> f);

/// sum mu slope^2 / Var_mu(f). Throws for constant f.
double rayleigh_quotient(const MetricMeasureSpace& mm, std::span<const double> f);

enum class EigenStrategy { SlopeDescent, SymmetricOracle };
std::string to_string(EigenStrategy s);

struct EigenOptions {
  std::size_t restarts = 32;
  std::uint64_t seed = 0;
  std::size_t stages = 6;
  double temperature_start = 1e-1;
  double temperature_end = 1e-6;
  std::size_t iterations_per_stage = 120;
  std::size_t polish_iterations = 200;
};

struct EigenEstimate {
  double value = 0.0;      ///< best Rayleigh quotient found
  ScalarField certificate;  ///< field attaining value
  std::size_t restarts = 0;
  std::size_t best_restart = 0;
  /// SymmetricOracle when the winning restart started from the oracle vector.
  EigenStrategy strategy = EigenStrategy::SlopeDescent;
};

/// Multi-start descent on the log-sum-exp smoothed quotient with annealed
/// temperature, then exact subgradient polish. Deterministic in the seed.
EigenEstimate first_eigenvalue(const MetricMeasureSpace& mm, const EigenOptions& options = {});
EigenEstimate first_eigenvalue(const MetricMeasureSpace& mm, std::size_t restarts, std::uint64_t seed);

struct OracleResult {
  double value = 0.0;    ///< second-smallest generalized eigenvalue
  ScalarField vector;    ///< its eigenvector
};

/// Graph Laplacian on k-nearest-neighbour edges with weights
/// (mu_i [j in N_k(i)] + mu_j [i in N_k(j)]) / (2 d(i,j)^2), solved against
/// the measure inner product by cyclic Jacobi. Symmetric spaces only.
OracleResult symmetric_oracle(const MetricMeasureSpace& mm, std::size_t k = 2);

/// Symmetric eigen-decomposition by cyclic Jacobi; eigenvalues ascending,
/// eigenvectors as columns of `vectors` (row-major n x n).
void jacobi_eigen(std::vector<double> a, std::size_t n, std::vector<double>& values,
                  std::vector<double>& vectors);

/// exp(-r sqrt(lambda1) log 2 / sqrt 2).
double thm61_bound(double lambda1, double r);

struct GmStep {
  std::size_t k = 0;
  double a = 0.0;         ///< mu(A_k)
  double b = 0.0;         ///< mu(B_k), B_k the complement of A_{k+1}
  double lambda_f = 0.0;  ///< quotient of the test function
  double bound = 0.0;     ///< (1 - a) / (1 + lambda_f eps^2 a)
  double energy = 0.0;    ///< sum mu slope(f)^2
  double energy_cap = 0.0;  ///< c^2 (1 - a - b), c = (1/eps)(1/a + 1/b)
  bool premise = false;   ///< energy <= energy_cap
  bool holds = false;     ///< b <= bound
};

struct GmReport {
  /// No step with the energy premise violates the recursion.
  bool passed = true;
  std::size_t conclusive_steps = 0;
  std::size_t inconclusive_steps = 0;
  double worst_margin = 0.0;  ///< min over premise steps of bound - b
  double decay = 1.0;         ///< product of bound / (1 - a) over premise steps
  std::string terminated;     ///< reason the chain stopped
  std::vector<GmStep> steps;
};

/// Iterates A_{k+1} = B-(A_k, eps) and checks the mass recursion with the
/// explicit two-level test function on each step.
GmReport gm_recursion_check(const MetricMeasureSpace& mm, const PointSet& A, double epsilon);

struct ChengInputs {
  int n = 2;        ///< manifold dimension
  double a = 0.0;   ///< distortion bound
  double K = 0.0;   ///< weighted Ricci lower bound
  double D = 1.0;   ///< diameter
};

/// max(C1, C2) / D^2 over both case constants.
double cheng_upper_bound(const ChengInputs& inputs);

/// (2 sqrt 2 / log 2) log(2/eps) / sqrt(lambda1).
double cor62_bound(double lambda1, double epsilon);

}  // namespace ccmm
