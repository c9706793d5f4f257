#include "ccmm/observable.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace ccmm {

namespace {

void require_kappa(double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw Error("kappa must lie in (0, 1)");
}

double set_diameter(const QuasiMetricSpace& space, const std::vector<Index>& members) {
  double d = 0.0;
  for (Index x : members)
    for (Index z : members) d = std::max(d, space(x, z));
  return d;
}

PartialDiameter exact_partial_diameter(const MetricMeasureSpace& mm, double need) {
  const std::size_t n = mm.size();
  const std::uint64_t subsets = std::uint64_t{1} << n;
  constexpr std::size_t chunk = 1024;
  struct Best {
    double value = std::numeric_limits<double>::infinity();
    std::uint64_t mask = 0;
  };
  std::vector<Best> partial((subsets + chunk - 1) / chunk);
  parallel_chunks(subsets, chunk, [&](std::size_t begin, std::size_t end) {
    Best& best = partial[begin / chunk];
    std::vector<Index> members;
    for (std::uint64_t mask = std::max<std::uint64_t>(begin, 1); mask < end; ++mask) {
      double m = 0.0;
      members.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1U) {
          m += mm.measure[i];
          members.push_back(i);
        }
      }
      if (m < need) continue;
      const double d = set_diameter(mm.space, members);
      if (d < best.value) best = {d, mask};
    }
  });
  Best best;
  for (const Best& b : partial)
    if (b.value < best.value) best = b;
  return {best.value, true, PointSet::from_mask(best.mask, n)};
}

PartialDiameter heuristic_partial_diameter(const MetricMeasureSpace& mm, double need) {
  const std::size_t n = mm.size();
  PartialDiameter best{std::numeric_limits<double>::infinity(), false, PointSet::all(n)};
  std::vector<Index> order(n);
  for (Index p = 0; p < n; ++p) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return mm.space(p, a) < mm.space(p, b); });
    double m = 0.0;
    std::vector<Index> members;
    for (Index x : order) {
      members.push_back(x);
      m += mm.measure[x];
      if (m >= need) break;
    }
    const double d = set_diameter(mm.space, members);
    if (d < best.value) best = {d, false, PointSet::of(members, n)};
  }

  if (n <= 400) {
    std::vector<Index> members(n);
    std::iota(members.begin(), members.end(), 0);
    double m = 1.0;
    for (;;) {
      Index fx = 0, fz = 0;
      double d = -1.0;
      for (Index x : members)
        for (Index z : members)
          if (mm.space(x, z) > d) d = mm.space(x, z), fx = x, fz = z;
      if (d < best.value) best = {d, false, PointSet::of(members, n)};
      Index drop = n;
      double drop_diam = std::numeric_limits<double>::infinity();
      for (Index cand : {fx, fz}) {
        if (m - mm.measure[cand] < need) continue;
        std::vector<Index> rest;
        for (Index y : members)
          if (y != cand) rest.push_back(y);
        const double dd = set_diameter(mm.space, rest);
        if (dd < drop_diam) drop_diam = dd, drop = cand;
      }
      if (drop == n) break;
      m -= mm.measure[drop];
      std::erase(members, drop);
    }
  }
  return best;
}

}  // namespace

PartialDiameter partial_diameter(const MetricMeasureSpace& mm, double kappa) {
  require_kappa(kappa);
  const double need = 1.0 - kappa - kMassTolerance;
  if (mm.size() <= kExactLimit) return exact_partial_diameter(mm, need);
  return heuristic_partial_diameter(mm, need);
}

double pushforward_partial_diameter(const ProbabilityMeasure& measure, std::span<const double> f,
                                    double kappa) {
  require_kappa(kappa);
  if (f.size() != measure.size()) throw Error("field length does not match the measure");
  std::vector<std::pair<double, double>> atoms(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) atoms[x] = {f[x], measure[x]};
  std::sort(atoms.begin(), atoms.end());
  std::vector<double> values, masses;
  for (const auto& [v, w] : atoms) {
    if (!values.empty() && values.back() == v) {
      masses.back() += w;
    } else {
      values.push_back(v);
      masses.push_back(w);
    }
  }
  const double need = 1.0 - kappa - kMassTolerance;
  double best = std::numeric_limits<double>::infinity();
  double window = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    while (j < values.size() && window < need) window += masses[j++];
    if (window < need) break;
    best = std::min(best, values[j - 1] - values[i]);
    window -= masses[i];
  }
  return best;
}

ObsDiamResult observable_diameter(const MetricMeasureSpace& mm, double kappa,
                                  const LipschitzFamily& family) {
  require_kappa(kappa);
  if (family.empty()) throw Error("observable diameter needs a nonempty family");
  std::vector<double> values(family.size());
  parallel_chunks(family.size(), 8, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& f = family[i].values;
      if (f.size() != mm.size() || !is_lipschitz(mm.space, f, 1.0)) {
        throw Error("family member " + std::to_string(i) + " is not 1-Lipschitz on this space");
      }
      values[i] = pushforward_partial_diameter(mm.measure, f, kappa);
    }
  });
  ObsDiamResult result;
  result.kappa = kappa;
  result.family_size = family.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > result.value || i == 0) {
      result.value = values[i];
      result.witness = i;
    }
  }
  return result;
}

double alpha_inverse(const ConcentrationProfile& profile, double epsilon) {
  if (!(epsilon > 0.0)) throw Error("alpha_inverse needs epsilon > 0");
  double previous = 0.0;
  for (double d : profile.distances) {
    if (profile.value_at(d) <= epsilon) return previous;
    previous = d;
  }
  return previous;
}

Thm41Report thm41_check(const MetricMeasureSpace& mm, std::span<const double> epsilons,
                        const LipschitzFamily& family, const ConcentrationProfile& exact_profile) {
  if (exact_profile.strategy != Strategy::Exact) throw Error("thm41_check needs an exact profile");
  Thm41Report report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (double eps : epsilons) {
    Thm41Entry e;
    e.epsilon = eps;
    const ObsDiamResult od = observable_diameter(mm, eps, family);
    e.obsdiam = od.value;
    e.witness = od.witness;
    e.bound = 2.0 * alpha_inverse(exact_profile, eps / 2.0);
    const double margin = e.bound - e.obsdiam;
    e.holds = margin >= -tie_band(e.bound);
    report.holds = report.holds && e.holds;
    report.worst_margin = std::min(report.worst_margin, margin);
    report.entries.push_back(e);
  }
  if (report.entries.empty()) report.worst_margin = 0.0;
  return report;
}

Thm41Report thm41_check(const MetricMeasureSpace& mm, std::span<const double> epsilons,
                        const LipschitzFamily& family) {
  return thm41_check(mm, epsilons, family, alpha_profile(mm, Strategy::Exact));
}

namespace {
double bound_log(double C, double c, double epsilon) {
  if (!(C > 0.0) || !(c > 0.0)) throw Error("observable diameter bounds need C, c > 0");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("epsilon must lie in (0, 1)");
  return std::max(0.0, std::log(2.0 * C / epsilon));
}
}  // namespace

double obsdiam_bound_normal(double C, double c, double epsilon) {
  return 2.0 * std::sqrt(bound_log(C, c, epsilon) / c);
}

double obsdiam_bound_exponential(double C, double c, double epsilon) {
  return 2.0 / c * bound_log(C, c, epsilon);
}

}  // namespace ccmm
