#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccmm/common.hpp"

namespace ccmm {

/// Dense row-major n x n matrix of directed distances.
using DistanceMatrix = std::vector<std::vector<double>>;

struct TriangleViolation {
  Index i, j, k;
  double excess;  ///< d(i,k) - d(i,j) - d(j,k) > 0
};

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> problems;  ///< diagonal / positivity violations
  std::vector<TriangleViolation> triangles;

  std::string summary(std::size_t max_items = 10) const;
};

struct ValidateOptions {
  double relative_tolerance = 0.0;  ///< 0 = exact check
  bool sampled = false;             ///< check 10 n^2 random triples instead of all n^3
  std::uint64_t seed = 0;
  std::size_t max_reported = 1000;
};

/// Checks positivity, zero diagonal and the directed triangle inequality.
/// Throws Error for structurally malformed input (non-square, NaN, negative).
ValidationReport validate(const DistanceMatrix& matrix, const ValidateOptions& options = {});

struct Edge {
  Index from, to;
  double weight;
};

/// Finite point set with an asymmetric distance. Immutable once built.
class QuasiMetricSpace {
 public:
  /// Validates and throws Error (with the violation summary) when invalid.
  static QuasiMetricSpace from_matrix(const DistanceMatrix& matrix,
                                      std::vector<std::string> labels = {},
                                      const ValidateOptions& options = {});

  std::size_t size() const { return n_; }
  double operator()(Index from, Index to) const { return dist_[from * n_ + to]; }
  std::span<const double> row(Index from) const { return {dist_.data() + from * n_, n_}; }
  const std::vector<std::string>& labels() const { return labels_; }

  DistanceMatrix matrix() const;
  /// All d(i,j), i != j, sorted ascending and deduplicated.
  std::vector<double> distinct_distances() const;
  double max_distance() const;
  double min_positive_distance() const;
  /// max over x of min over y != x of d(x, y): one mesh step.
  double mesh_step() const;
  bool is_symmetric(double tolerance = 0.0) const;
  /// Multiplies every distance by s > 0.
  QuasiMetricSpace scaled(double s) const;

 private:
  QuasiMetricSpace(std::size_t n, std::vector<double> dist, std::vector<std::string> labels)
      : n_(n), dist_(std::move(dist)), labels_(std::move(labels)) {}

  friend QuasiMetricSpace reverse(const QuasiMetricSpace& space);
  friend QuasiMetricSpace from_digraph(std::size_t n, std::span<const Edge> edges);

  std::size_t n_ = 0;
  std::vector<double> dist_;
  std::vector<std::string> labels_;
};

/// Nonnegative weights summing to one.
class ProbabilityMeasure {
 public:
  explicit ProbabilityMeasure(std::vector<double> weights);
  static ProbabilityMeasure uniform(std::size_t n);
  /// Scales nonnegative weights with positive total to sum one.
  static ProbabilityMeasure normalized(std::vector<double> weights);

  std::size_t size() const { return w_.size(); }
  double operator[](Index i) const { return w_[i]; }
  const std::vector<double>& weights() const { return w_; }

 private:
  std::vector<double> w_;
};

struct MetricMeasureSpace {
  QuasiMetricSpace space;
  ProbabilityMeasure measure;

  MetricMeasureSpace(QuasiMetricSpace s, ProbabilityMeasure m);
  std::size_t size() const { return space.size(); }
};

/// Sorted, duplicate-free point indices.
class PointSet {
 public:
  PointSet() = default;
  /// Sorts and removes duplicates; indices must be < n.
  static PointSet of(std::vector<Index> members, std::size_t n);
  static PointSet all(std::size_t n);
  static PointSet from_mask(std::uint64_t mask, std::size_t n);

  const std::vector<Index>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(Index i) const;
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  bool operator==(const PointSet&) const = default;

 private:
  std::vector<Index> members_;
};

double mass(const ProbabilityMeasure& measure, const PointSet& set);

/// Shortest directed path lengths; throws Error naming an unreachable pair.
QuasiMetricSpace from_digraph(std::size_t n, std::span<const Edge> edges);

/// d'(i,j) = d(j,i).
QuasiMetricSpace reverse(const QuasiMetricSpace& space);

/// min over z in A of d(z, x), for every x.
std::vector<double> distance_from_set(const QuasiMetricSpace& space, const PointSet& set);
/// min over z in A of d(x, z), for every x.
std::vector<double> distance_to_set(const QuasiMetricSpace& space, const PointSet& set);

/// {x : min_z d(z,x) < r}.
PointSet forward_neighborhood(const QuasiMetricSpace& space, const PointSet& set, double r);
/// {x : min_z d(x,z) < r}.
PointSet backward_neighborhood(const QuasiMetricSpace& space, const PointSet& set, double r);

/// max over ordered pairs of d(x,z); 0 for a singleton.
double diameter(const QuasiMetricSpace& space, const PointSet& set);
double diameter(const QuasiMetricSpace& space);

/// Random strongly connected digraph metric: a directed ring plus each other
/// arc with probability `density`, weights uniform on [0.1, 2), and a random
/// measure with weights uniform on [0.05, 1) before normalization.
MetricMeasureSpace random_space(std::size_t n, std::uint64_t seed, double density = 0.4);

}  // namespace ccmm
