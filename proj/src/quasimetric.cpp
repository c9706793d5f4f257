#include "ccmm/quasimetric.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <sstream>

namespace ccmm {

std::string ValidationReport::summary(std::size_t max_items) const {
  std::ostringstream out;
  out.precision(17);
  std::size_t shown = 0;
  for (const auto& p : problems) {
    if (shown++ >= max_items) break;
    out << p << "\n";
  }
  for (const auto& t : triangles) {
    if (shown++ >= max_items) break;
    out << "triangle (" << t.i << "," << t.j << "," << t.k << "): d(" << t.i << "," << t.k
        << ") exceeds d(" << t.i << "," << t.j << ")+d(" << t.j << "," << t.k << ") by " << t.excess
        << "\n";
  }
  const std::size_t total = problems.size() + triangles.size();
  if (total > max_items) out << "... " << (total - max_items) << " more\n";
  return out.str();
}

ValidationReport validate(const DistanceMatrix& matrix, const ValidateOptions& options) {
  const std::size_t n = matrix.size();
  if (n == 0) throw Error("distance matrix is empty");
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) {
      throw Error("distance matrix is not square: row " + std::to_string(i) + " has " +
                  std::to_string(matrix[i].size()) + " entries, expected " + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double v = matrix[i][j];
      if (!std::isfinite(v)) {
        throw Error("distance (" + std::to_string(i) + "," + std::to_string(j) + ") is not finite");
      }
      if (v < 0.0) {
        throw Error("distance (" + std::to_string(i) + "," + std::to_string(j) + ") is negative");
      }
    }
  }

  ValidationReport report;
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i][i] != 0.0) {
      report.problems.push_back("diagonal entry (" + std::to_string(i) + "," + std::to_string(i) +
                                ") is nonzero");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && matrix[i][j] <= 0.0) {
        report.problems.push_back("off-diagonal entry (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") is not positive");
      }
    }
  }

  auto check = [&](std::size_t i, std::size_t j, std::size_t k) {
    const double direct = matrix[i][k];
    const double via = matrix[i][j] + matrix[j][k];
    const double slack = options.relative_tolerance * std::max(direct, via);
    if (direct > via + slack && report.triangles.size() < options.max_reported) {
      report.triangles.push_back({i, j, k, direct - via});
    }
  };

  if (options.sampled) {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const std::size_t samples = 10 * n * n;
    for (std::size_t s = 0; s < samples; ++s) {
      const std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
      check(i, j, k);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) check(i, j, k);
  }
  report.valid = report.problems.empty() && report.triangles.empty();
  return report;
}

QuasiMetricSpace QuasiMetricSpace::from_matrix(const DistanceMatrix& matrix,
                                               std::vector<std::string> labels,
                                               const ValidateOptions& options) {
  const ValidationReport report = validate(matrix, options);
  if (!report.valid) throw Error("invalid quasi-metric:\n" + report.summary());
  const std::size_t n = matrix.size();
  if (!labels.empty() && labels.size() != n) {
    throw Error("label count " + std::to_string(labels.size()) + " does not match point count " +
                std::to_string(n));
  }
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i)
    std::copy(matrix[i].begin(), matrix[i].end(), dist.begin() + static_cast<std::ptrdiff_t>(i * n));
  return QuasiMetricSpace(n, std::move(dist), std::move(labels));
}

DistanceMatrix QuasiMetricSpace::matrix() const {
  DistanceMatrix m(n_, std::vector<double>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m[i][j] = (*this)(i, j);
  return m;
}

std::vector<double> QuasiMetricSpace::distinct_distances() const {
  std::vector<double> values;
  values.reserve(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (i != j) values.push_back((*this)(i, j));
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

double QuasiMetricSpace::max_distance() const {
  return dist_.empty() ? 0.0 : *std::max_element(dist_.begin(), dist_.end());
}

double QuasiMetricSpace::min_positive_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (i != j) best = std::min(best, (*this)(i, j));
  return best;
}

double QuasiMetricSpace::mesh_step() const {
  double step = 0.0;
  for (Index x = 0; x < n_; ++x) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Index y = 0; y < n_; ++y)
      if (y != x) nearest = std::min(nearest, (*this)(x, y));
    if (std::isfinite(nearest)) step = std::max(step, nearest);
  }
  return step;
}

bool QuasiMetricSpace::is_symmetric(double tolerance) const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double a = (*this)(i, j), b = (*this)(j, i);
      if (std::abs(a - b) > tolerance * std::max(a, b)) return false;
    }
  return true;
}

QuasiMetricSpace QuasiMetricSpace::scaled(double s) const {
  if (!(s > 0.0) || !std::isfinite(s)) throw Error("scale factor must be positive and finite");
  std::vector<double> dist(dist_);
  for (double& d : dist) d *= s;
  return QuasiMetricSpace(n_, std::move(dist), labels_);
}

ProbabilityMeasure::ProbabilityMeasure(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw Error("measure has no points");
  double total = 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (!std::isfinite(w_[i]) || w_[i] < 0.0) {
      throw Error("measure weight " + std::to_string(i) + " is negative or not finite");
    }
    total += w_[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "measure weights sum to " << total << ", expected 1";
    throw Error(msg.str());
  }
}

ProbabilityMeasure ProbabilityMeasure::uniform(std::size_t n) {
  if (n == 0) throw Error("measure has no points");
  return ProbabilityMeasure(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbabilityMeasure ProbabilityMeasure::normalized(std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw Error("measure weight is negative or not finite");
    total += w;
  }
  if (!(total > 0.0)) throw Error("measure has zero total mass");
  for (double& w : weights) w /= total;
  return ProbabilityMeasure(std::move(weights));
}

MetricMeasureSpace::MetricMeasureSpace(QuasiMetricSpace s, ProbabilityMeasure m)
    : space(std::move(s)), measure(std::move(m)) {
  if (space.size() != measure.size()) {
    throw Error("measure has " + std::to_string(measure.size()) + " weights but space has " +
                std::to_string(space.size()) + " points");
  }
}

PointSet PointSet::of(std::vector<Index> members, std::size_t n) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (!members.empty() && members.back() >= n) {
    throw Error("point index " + std::to_string(members.back()) + " out of range for " +
                std::to_string(n) + " points");
  }
  PointSet s;
  s.members_ = std::move(members);
  return s;
}

PointSet PointSet::all(std::size_t n) {
  PointSet s;
  s.members_.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.members_[i] = i;
  return s;
}

PointSet PointSet::from_mask(std::uint64_t mask, std::size_t n) {
  PointSet s;
  for (std::size_t i = 0; i < n; ++i)
    if (mask >> i & 1U) s.members_.push_back(i);
  return s;
}

bool PointSet::contains(Index i) const {
  return std::binary_search(members_.begin(), members_.end(), i);
}

double mass(const ProbabilityMeasure& measure, const PointSet& set) {
  double m = 0.0;
  for (Index i : set) m += measure[i];
  return m;
}

QuasiMetricSpace from_digraph(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) throw Error("digraph has no vertices");
  std::vector<std::vector<std::pair<Index, double>>> adjacency(n);
  for (const Edge& e : edges) {
    if (e.from >= n || e.to >= n) throw Error("edge endpoint out of range");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw Error("edge (" + std::to_string(e.from) + "," + std::to_string(e.to) +
                  ") has non-positive or non-finite weight");
    }
    if (e.from != e.to) adjacency[e.from].emplace_back(e.to, e.weight);
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n * n, inf);
  parallel_chunks(n, 16, [&](std::size_t begin, std::size_t end) {
    using Item = std::pair<double, Index>;
    for (std::size_t source = begin; source < end; ++source) {
      double* d = dist.data() + source * n;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      d[source] = 0.0;
      heap.emplace(0.0, source);
      while (!heap.empty()) {
        const auto [du, u] = heap.top();
        heap.pop();
        if (du > d[u]) continue;
        for (const auto& [v, w] : adjacency[u]) {
          const double candidate = du + w;
          if (candidate < d[v]) {
            d[v] = candidate;
            heap.emplace(candidate, v);
          }
        }
      }
    }
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (dist[i * n + j] == inf) {
        throw Error("digraph is not strongly connected: no path from " + std::to_string(i) +
                    " to " + std::to_string(j));
      }
  // Path sums in a different association can exceed a detour by an ulp; close
  // the matrix under floating-point min-plus so the triangle check is exact.
  std::vector<double> next(n * n);
  for (bool changed = true; changed;) {
    parallel_chunks(n, 16, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const double* di = dist.data() + i * n;
        double* out = next.data() + i * n;
        std::copy(di, di + n, out);
        for (std::size_t j = 0; j < n; ++j) {
          const double* dj = dist.data() + j * n;
          for (std::size_t k = 0; k < n; ++k) out[k] = std::min(out[k], di[j] + dj[k]);
        }
      }
    });
    changed = next != dist;
    dist.swap(next);
  }
  return QuasiMetricSpace(n, std::move(dist), {});
}

QuasiMetricSpace reverse(const QuasiMetricSpace& space) {
  const std::size_t n = space.size();
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = space(j, i);
  return QuasiMetricSpace(n, std::move(dist), space.labels());
}

namespace {

void require_nonempty(const PointSet& set) {
  if (set.empty()) throw Error("point set must be nonempty");
}

}  // namespace

std::vector<double> distance_from_set(const QuasiMetricSpace& space, const PointSet& set) {
  require_nonempty(set);
  const std::size_t n = space.size();
  std::vector<double> out(n, std::numeric_limits<double>::infinity());
  for (Index z : set) {
    const auto row = space.row(z);
    for (std::size_t x = 0; x < n; ++x) out[x] = std::min(out[x], row[x]);
  }
  return out;
}

std::vector<double> distance_to_set(const QuasiMetricSpace& space, const PointSet& set) {
  require_nonempty(set);
  const std::size_t n = space.size();
  std::vector<double> out(n, std::numeric_limits<double>::infinity());
  for (std::size_t x = 0; x < n; ++x)
    for (Index z : set) out[x] = std::min(out[x], space(x, z));
  return out;
}

namespace {

PointSet open_ball_of(const std::vector<double>& to_set, double r, std::size_t n) {
  if (!(r > 0.0)) throw Error("neighborhood radius must be positive");
  std::vector<Index> members;
  for (std::size_t x = 0; x < n; ++x)
    if (!reaches(to_set[x], r)) members.push_back(x);
  return PointSet::of(std::move(members), n);
}

}  // namespace

PointSet forward_neighborhood(const QuasiMetricSpace& space, const PointSet& set, double r) {
  return open_ball_of(distance_from_set(space, set), r, space.size());
}

PointSet backward_neighborhood(const QuasiMetricSpace& space, const PointSet& set, double r) {
  return open_ball_of(distance_to_set(space, set), r, space.size());
}

double diameter(const QuasiMetricSpace& space, const PointSet& set) {
  require_nonempty(set);
  double best = 0.0;
  for (Index x : set)
    for (Index z : set) best = std::max(best, space(x, z));
  return best;
}

double diameter(const QuasiMetricSpace& space) { return space.max_distance(); }

MetricMeasureSpace random_space(std::size_t n, std::uint64_t seed, double density) {
  if (n < 2) throw Error("random_space needs n >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.1, 2.0), coin(0.0, 1.0), mass(0.05, 1.0);
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, weight(rng)});
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && j != (i + 1) % n && coin(rng) < density) edges.push_back({i, j, weight(rng)});
  std::vector<double> w(n);
  for (double& v : w) v = mass(rng);
  return MetricMeasureSpace(from_digraph(n, edges), ProbabilityMeasure::normalized(std::move(w)));
}

}  // namespace ccmm
