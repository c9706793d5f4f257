#include "ccmm/spectrum.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

namespace ccmm {

std::string to_string(EigenStrategy s) {
  return s == EigenStrategy::SlopeDescent ? "slope-descent" : "symmetric-oracle";
}

double dual_slope(const MetricMeasureSpace& mm, std::span<const double> f, Index x) {
  if (f.size() != mm.size()) throw Error("field length does not match the space");
  const auto row = mm.space.row(x);
  double s = 0.0;
  for (std::size_t z = 0; z < f.size(); ++z)
    if (z != x) s = std::max(s, (f[z] - f[x]) / row[z]);
  return s;
}

std::vector<double> ascending_slopes(const QuasiMetricSpace& space, std::span<const double> f) {
  const std::size_t n = space.size();
  if (f.size() != n) throw Error("field length does not match the space");
  std::vector<double> s(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    const auto row = space.row(x);
    for (std::size_t z = 0; z < n; ++z)
      if (z != x) s[x] = std::max(s[x], (f[z] - f[x]) / row[z]);
  }
  return s;
}

namespace {

double variance(const ProbabilityMeasure& mu, std::span<const double> f) {
  const double m = mean(mu, f);
  double v = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) v += mu[x] * (f[x] - m) * (f[x] - m);
  return v;
}

double slope_energy(const MetricMeasureSpace& mm, std::span<const double> f) {
  const auto s = ascending_slopes(mm.space, f);
  double e = 0.0;
  for (std::size_t x = 0; x < s.size(); ++x) e += mm.measure[x] * s[x] * s[x];
  return e;
}

/// Quotient with slopes replaced by T log(1 + sum exp(q/T)) when T > 0, or by
/// the exact slope (one-hot subgradient) when T == 0. Fills grad if given.
double smoothed_quotient(const MetricMeasureSpace& mm, std::span<const double> f, double T,
                         std::vector<double>* grad) {
  const std::size_t n = mm.size();
  const auto& mu = mm.measure;
  const double m = mean(mu, f);
  double var = 0.0;
  for (std::size_t x = 0; x < n; ++x) var += mu[x] * (f[x] - m) * (f[x] - m);
  if (!(var > 0.0)) return std::numeric_limits<double>::infinity();

  std::vector<double> q(n), dnum;
  if (grad) dnum.assign(n, 0.0);
  double num = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    const auto row = mm.space.row(x);
    double top = 0.0;
    std::size_t arg = n;
    for (std::size_t z = 0; z < n; ++z) {
      q[z] = z == x ? -std::numeric_limits<double>::infinity() : (f[z] - f[x]) / row[z];
      if (q[z] > top) top = q[z], arg = z;
    }
    double s = top;
    if (T > 0.0) {
      double total = std::exp(-top / T);
      for (std::size_t z = 0; z < n; ++z)
        if (z != x) total += std::exp((q[z] - top) / T);
      s = top + T * std::log(total);
      if (grad) {
        const double coef = 2.0 * mu[x] * s / total;
        for (std::size_t z = 0; z < n; ++z) {
          if (z == x) continue;
          const double w = coef * std::exp((q[z] - top) / T) / row[z];
          dnum[z] += w;
          dnum[x] -= w;
        }
      }
    } else if (grad && arg < n) {
      const double w = 2.0 * mu[x] * s / row[arg];
      dnum[arg] += w;
      dnum[x] -= w;
    }
    num += mu[x] * s * s;
  }
  const double R = num / var;
  if (grad) {
    grad->resize(n);
    for (std::size_t j = 0; j < n; ++j) (*grad)[j] = (dnum[j] - R * 2.0 * mu[j] * (f[j] - m)) / var;
  }
  return R;
}

/// Centres f and scales it to unit standard deviation; false for constant f.
bool standardize(const ProbabilityMeasure& mu, std::vector<double>& f) {
  const double m = mean(mu, f);
  for (double& v : f) v -= m;
  const double sd = std::sqrt(variance(mu, f));
  if (!(sd > 0.0) || !std::isfinite(sd)) return false;
  for (double& v : f) v /= sd;
  return true;
}

double norm2(const std::vector<double>& g) {
  double s = 0.0;
  for (double v : g) s += v * v;
  return std::sqrt(s);
}

double max_abs_slope(const QuasiMetricSpace& space, std::span<const double> f) {
  const auto s = ascending_slopes(space, f);
  return *std::max_element(s.begin(), s.end());
}

struct RestartResult {
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> field;
};

/// Normalized-gradient descent with Armijo backtracking on one objective.
/// `temperature` maps the current field to the absolute temperature.
template <class Temperature>
void descend(const MetricMeasureSpace& mm, std::vector<double>& f, std::size_t iterations,
             Temperature temperature, RestartResult& best) {
  std::vector<double> g, trial(f.size());
  double t = 0.25;
  for (std::size_t it = 0; it < iterations; ++it) {
    const double T = temperature(f);
    const double value = smoothed_quotient(mm, f, T, &g);
    const double gn = norm2(g);
    if (!(gn > 0.0) || !std::isfinite(value)) break;
    bool moved = false;
    while (t > 1e-12) {
      for (std::size_t x = 0; x < f.size(); ++x) trial[x] = f[x] - t * g[x] / gn;
      const double tv = smoothed_quotient(mm, trial, T, nullptr);
      if (tv <= value - 1e-4 * t * gn) {
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
    if (!standardize(mm.measure, trial)) break;
    f = trial;
    t = std::min(1.0, 2.0 * t);
  }
  const double exact = smoothed_quotient(mm, f, 0.0, nullptr);
  if (exact < best.value) {
    best.value = exact;
    best.field = f;
  }
}

}  // namespace

double rayleigh_quotient(const MetricMeasureSpace& mm, std::span<const double> f) {
  if (f.size() != mm.size()) throw Error("field length does not match the space");
  const double var = variance(mm.measure, f);
  if (!(var > 0.0)) throw Error("rayleigh_quotient is undefined for a constant field");
  return slope_energy(mm, f) / var;
}

EigenEstimate first_eigenvalue(const MetricMeasureSpace& mm, std::size_t restarts, std::uint64_t seed) {
  EigenOptions options;
  options.restarts = restarts;
  options.seed = seed;
  return first_eigenvalue(mm, options);
}

EigenEstimate first_eigenvalue(const MetricMeasureSpace& mm, const EigenOptions& options) {
  const std::size_t n = mm.size();
  if (n < 2) throw Error("first_eigenvalue needs at least two points");
  const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);

  std::optional<ScalarField> oracle_vector;
  if (mm.space.is_symmetric(1e-12)) {
    bool positive = true;
    for (double w : mm.measure.weights()) positive = positive && w > 0.0;
    if (positive) oracle_vector = symmetric_oracle(mm).vector;
  }

  // Restart plan: oracle vector, evenly spaced distance fields, random fields.
  const std::size_t first_distance = oracle_vector ? 1 : 0;
  const std::size_t distance_count = std::min(n, (restarts - first_distance + 1) / 2);
  auto initial = [&](std::size_t i) {
    std::vector<double> f(n);
    if (oracle_vector && i == 0) return *oracle_vector;
    if (i < first_distance + distance_count) {
      const Index p = (i - first_distance) * n / std::max<std::size_t>(distance_count, 1);
      for (std::size_t x = 0; x < n; ++x) f[x] = mm.space(p, x);
      return f;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    for (double& v : f) v = normal(rng);
    return f;
  };

  std::vector<RestartResult> results(restarts);
  parallel_chunks(restarts, 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      std::vector<double> f = initial(i);
      RestartResult& best = results[i];
      if (!standardize(mm.measure, f)) continue;
      best.value = smoothed_quotient(mm, f, 0.0, nullptr);
      best.field = f;
      const std::size_t stages = std::max<std::size_t>(options.stages, 1);
      for (std::size_t s = 0; s < stages; ++s) {
        const double frac = stages == 1 ? 0.0 : static_cast<double>(s) / static_cast<double>(stages - 1);
        const double rel = options.temperature_start *
                           std::pow(options.temperature_end / options.temperature_start, frac);
        descend(mm, f, options.iterations_per_stage,
                [&](const std::vector<double>& g) { return rel * max_abs_slope(mm.space, g); }, best);
      }
      std::vector<double> polish = best.field;
      descend(mm, polish, options.polish_iterations, [](const std::vector<double>&) { return 0.0; },
              best);
    }
  });

  EigenEstimate estimate;
  estimate.restarts = restarts;
  estimate.value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < restarts; ++i) {
    if (results[i].value < estimate.value) {
      estimate.value = results[i].value;
      estimate.best_restart = i;
    }
  }
  if (!std::isfinite(estimate.value)) throw Error("first_eigenvalue found no non-constant field");
  estimate.certificate = results[estimate.best_restart].field;
  estimate.value = rayleigh_quotient(mm, estimate.certificate);
  estimate.strategy = oracle_vector && estimate.best_restart == 0 ? EigenStrategy::SymmetricOracle
                                                                  : EigenStrategy::SlopeDescent;
  return estimate;
}

void jacobi_eigen(std::vector<double> a, std::size_t n, std::vector<double>& values,
                  std::vector<double>& vectors) {
  if (a.size() != n * n) throw Error("jacobi_eigen: matrix size mismatch");
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  double total = 0.0;
  for (double x : a) total += x * x;
  const double threshold = 1e-30 * total;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
    if (off <= threshold) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return A(i, i) < A(j, j); });
  values.resize(n);
  vectors.assign(n * n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    values[c] = A(order[c], order[c]);
    for (std::size_t k = 0; k < n; ++k) vectors[k * n + c] = v[k * n + order[c]];
  }
}

OracleResult symmetric_oracle(const MetricMeasureSpace& mm, std::size_t k) {
  const std::size_t n = mm.size();
  if (n < 2) throw Error("symmetric_oracle needs at least two points");
  if (!mm.space.is_symmetric(1e-12)) throw Error("symmetric_oracle needs a symmetric space");
  if (k == 0) throw Error("symmetric_oracle needs k >= 1");
  for (double w : mm.measure.weights())
    if (!(w > 0.0)) throw Error("symmetric_oracle needs strictly positive weights");
  k = std::min(k, n - 1);

  std::vector<double> W(n * n, 0.0);
  std::vector<Index> order;
  for (Index i = 0; i < n; ++i) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    std::erase(order, i);
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return mm.space(i, a) < mm.space(i, b); });
    for (std::size_t t = 0; t < k; ++t) {
      const Index j = order[t];
      const double d = mm.space(i, j);
      const double w = 0.5 * mm.measure[i] / (d * d);
      W[i * n + j] += w;
      W[j * n + i] += w;
    }
  }
  std::vector<double> A(n * n, 0.0), root(n);
  for (std::size_t i = 0; i < n; ++i) root[i] = std::sqrt(mm.measure[i]);
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    for (std::size_t j = 0; j < n; ++j) degree += W[i * n + j];
    for (std::size_t j = 0; j < n; ++j) {
      const double L = (i == j ? degree : 0.0) - W[i * n + j];
      A[i * n + j] = L / (root[i] * root[j]);
    }
  }
  std::vector<double> values, vectors;
  jacobi_eigen(std::move(A), n, values, vectors);
  OracleResult r;
  r.value = values[1];
  r.vector.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.vector[i] = vectors[i * n + 1] / root[i];
  return r;
}

double thm61_bound(double lambda1, double r) {
  if (!(lambda1 > 0.0) || !(r > 0.0)) throw Error("thm61_bound needs lambda1 > 0 and r > 0");
  return std::exp(-r * std::sqrt(lambda1) * (std::numbers::ln2 / std::numbers::sqrt2));
}

GmReport gm_recursion_check(const MetricMeasureSpace& mm, const PointSet& A, double epsilon) {
  if (!(epsilon > 0.0)) throw Error("gm_recursion_check needs epsilon > 0");
  if (A.empty()) throw Error("gm_recursion_check needs a nonempty set");
  if (mass(mm.measure, A) < 0.5 - kMassTolerance) throw Error("gm_recursion_check needs mu(A) >= 1/2");
  const std::size_t n = mm.size();
  GmReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  PointSet current = A;
  for (std::size_t k = 0; k <= n; ++k) {
    GmStep step;
    step.k = k;
    step.a = mass(mm.measure, current);
    if (step.a >= 1.0 - kMassTolerance) {
      report.terminated = "A_" + std::to_string(k) + " carries all the mass";
      break;
    }
    const PointSet next = backward_neighborhood(mm.space, current, epsilon);
    double b = 0.0;
    for (std::size_t x = 0; x < n; ++x)
      if (!next.contains(x)) b += mm.measure[x];
    step.b = b;
    if (b <= kMassTolerance) {
      step.holds = step.premise = true;
      step.bound = 1.0 - step.a;
      report.steps.push_back(step);
      ++report.conclusive_steps;
      report.terminated = "B_" + std::to_string(k) + " is empty";
      break;
    }
    const double a = step.a;
    const double c = (1.0 / epsilon) * (1.0 / a + 1.0 / b);
    const auto to_set = distance_to_set(mm.space, current);
    ScalarField f(n);
    for (std::size_t x = 0; x < n; ++x) f[x] = 1.0 / a - c * std::min(to_set[x], epsilon);
    step.energy = slope_energy(mm, f);
    step.lambda_f = step.energy / variance(mm.measure, f);
    step.bound = (1.0 - a) / (1.0 + step.lambda_f * epsilon * epsilon * a);
    step.energy_cap = c * c * std::max(0.0, 1.0 - a - b);
    step.premise = step.energy <= step.energy_cap * (1.0 + 1e-12);
    step.holds = b <= step.bound + kMassTolerance;
    if (step.premise) {
      ++report.conclusive_steps;
      report.worst_margin = std::min(report.worst_margin, step.bound - b);
      report.decay *= step.bound / (1.0 - a);
      if (!step.holds) report.passed = false;
    } else {
      ++report.inconclusive_steps;
    }
    report.steps.push_back(step);
    if (next == current) {
      report.terminated = "enlargement stalled at step " + std::to_string(k);
      break;
    }
    current = next;
  }
  if (std::isinf(report.worst_margin)) report.worst_margin = 0.0;
  return report;
}

double cheng_upper_bound(const ChengInputs& in) {
  if (in.n < 2) throw Error("cheng_upper_bound needs dimension n >= 2");
  if (!(in.a >= 0.0)) throw Error("cheng_upper_bound needs a >= 0");
  if (!(in.D > 0.0)) throw Error("cheng_upper_bound needs D > 0");
  const double n = in.n;
  const double lead = (n + 4.0 * in.a) * (n + 4.0 * in.a);
  const double curv = in.D * std::sqrt(std::abs(in.K)) / (std::sqrt(n - 1.0) * std::numbers::ln2);
  const double c1 = 32.0 * lead * (2.0 + curv) * (2.0 + curv);
  const double c2 = 128.0 * lead * (3.0 + curv) * (3.0 + curv);
  return std::max(c1, c2) / (in.D * in.D);
}

double cor62_bound(double lambda1, double epsilon) {
  if (!(lambda1 > 0.0)) throw Error("cor62_bound needs lambda1 > 0");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("epsilon must lie in (0, 1)");
  return 2.0 * std::numbers::sqrt2 / std::numbers::ln2 * std::log(2.0 / epsilon) / std::sqrt(lambda1);
}

}  // namespace ccmm
