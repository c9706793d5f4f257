#include "ccmm/concentration.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace ccmm {

namespace {

constexpr double kDeviationTolerance = 1e-10;

double deviation_band(double t) { return kDeviationTolerance * std::max(1.0, t); }

/// Ascending distances paired with suffix masses; answers "mass of points
/// whose distance reaches r" for ascending radii in one sweep.
class ReachSweep {
 public:
  void reset(std::span<const double> dist, const ProbabilityMeasure& mu) {
    const std::size_t n = dist.size();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(), [&](Index a, Index b) {
      return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
    });
    sorted_.resize(n);
    suffix_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) sorted_[i] = dist[order_[i]];
    for (std::size_t i = n; i-- > 0;) suffix_[i] = suffix_[i + 1] + mu[order_[i]];
  }

  /// out[k] = max(out[k], mass reaching radii[k]); radii ascending.
  void fold_max(std::span<const double> radii, std::vector<double>& out) const {
    std::size_t p = 0;
    for (std::size_t k = 0; k < radii.size(); ++k) {
      const double threshold = radii[k] - tie_band(radii[k]);
      while (p < sorted_.size() && sorted_[p] < threshold) ++p;
      out[k] = std::max(out[k], suffix_[p]);
    }
  }

 private:
  std::vector<Index> order_;
  std::vector<double> sorted_;
  std::vector<double> suffix_;
};

/// Fold the outside masses of one half-mass set into `best`.
void fold_set(const MetricMeasureSpace& mm, const PointSet& set, std::span<const double> radii,
              std::vector<double>& best, ReachSweep& sweep) {
  sweep.reset(distance_from_set(mm.space, set), mm.measure);
  sweep.fold_max(radii, best);
  sweep.reset(distance_to_set(mm.space, set), mm.measure);
  sweep.fold_max(radii, best);
}

std::vector<double> scan_exact(const MetricMeasureSpace& mm, std::span<const double> radii) {
  const std::size_t n = mm.size();
  if (n > kExactLimit) {
    throw Error("exact strategy requires n <= " + std::to_string(kExactLimit) + ", got " +
                std::to_string(n));
  }
  const std::uint64_t subsets = std::uint64_t{1} << n;
  constexpr std::size_t chunk = 512;
  const std::size_t chunks = (subsets + chunk - 1) / chunk;
  std::vector<std::vector<double>> partial(chunks, std::vector<double>(radii.size(), 0.0));
  parallel_chunks(subsets, chunk, [&](std::size_t begin, std::size_t end) {
    auto& best = partial[begin / chunk];
    ReachSweep sweep;
    for (std::uint64_t mask = std::max<std::uint64_t>(begin, 1); mask < end; ++mask) {
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1U) m += mm.measure[i];
      if (m < 0.5 - kMassTolerance) continue;
      fold_set(mm, PointSet::from_mask(mask, n), radii, best, sweep);
    }
  });
  std::vector<double> best(radii.size(), 0.0);
  for (const auto& p : partial)
    for (std::size_t k = 0; k < best.size(); ++k) best[k] = std::max(best[k], p[k]);
  return best;
}

std::vector<double> scan_sets(const MetricMeasureSpace& mm, const std::vector<PointSet>& sets,
                              std::span<const double> radii) {
  constexpr std::size_t chunk = 16;
  const std::size_t chunks = (sets.size() + chunk - 1) / chunk;
  std::vector<std::vector<double>> partial(chunks, std::vector<double>(radii.size(), 0.0));
  parallel_chunks(sets.size(), chunk, [&](std::size_t begin, std::size_t end) {
    auto& best = partial[begin / chunk];
    ReachSweep sweep;
    for (std::size_t s = begin; s < end; ++s) fold_set(mm, sets[s], radii, best, sweep);
  });
  std::vector<double> best(radii.size(), 0.0);
  for (const auto& p : partial)
    for (std::size_t k = 0; k < best.size(); ++k) best[k] = std::max(best[k], p[k]);
  return best;
}

/// Smallest sublevel set {g <= t} with mass >= 1/2.
PointSet minimal_half_sublevel(std::span<const double> g, const ProbabilityMeasure& mu) {
  const double m = median(mu, g);
  std::vector<Index> members;
  for (std::size_t x = 0; x < g.size(); ++x)
    if (g[x] <= m) members.push_back(x);
  return PointSet::of(std::move(members), g.size());
}

ConcentrationProfile make_profile(const MetricMeasureSpace& mm, Strategy strategy,
                                  const std::function<std::vector<double>(std::span<const double>)>& scan) {
  ConcentrationProfile profile;
  profile.strategy = strategy;
  profile.distances = mm.space.distinct_distances();
  const double diam = profile.diameter();
  profile.delta = 1e-9 * diam;

  std::vector<double> radii;
  radii.reserve(2 * profile.distances.size());
  for (double d : profile.distances) {
    radii.push_back(d);
    radii.push_back(d + profile.delta);
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  if (radii.empty()) return profile;

  std::vector<double> values = scan(radii);
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[k - 1]) {
      throw Error("internal: concentration profile is not monotone at r = " +
                  std::to_string(radii[k]));
    }
  }
  profile.points.reserve(radii.size());
  for (std::size_t k = 0; k < radii.size(); ++k) profile.points.push_back({radii[k], values[k]});
  return profile;
}

}  // namespace

double ConcentrationProfile::value_at(double r) const {
  if (distances.empty()) return 0.0;
  const double threshold = r - tie_band(r);
  auto it = std::lower_bound(distances.begin(), distances.end(), threshold);
  if (it == distances.end()) return 0.0;
  // alpha is constant on (d_{k-1}, d_k]; read the sample taken at d_k.
  const double dk = *it;
  auto pt = std::lower_bound(points.begin(), points.end(), dk,
                             [](const ProfilePoint& p, double v) { return p.r < v; });
  if (pt == points.end()) return 0.0;
  return pt->alpha;
}

std::size_t default_family_count(std::size_t n) { return 2 * n + 32; }

std::vector<PointSet> family_candidate_sets(const MetricMeasureSpace& mm,
                                            const LipschitzFamily& family) {
  const std::size_t n = mm.size();
  std::vector<PointSet> sets;
  sets.reserve(2 * n + 2 * family.size());
  std::vector<double> g(n);
  for (Index p = 0; p < n; ++p) {
    for (std::size_t x = 0; x < n; ++x) g[x] = mm.space(p, x);
    sets.push_back(minimal_half_sublevel(g, mm.measure));
    for (std::size_t x = 0; x < n; ++x) g[x] = mm.space(x, p);
    sets.push_back(minimal_half_sublevel(g, mm.measure));
  }
  for (const auto& member : family.members()) {
    const auto& f = member.values;
    const double m = median(mm.measure, f);
    std::vector<Index> below, above;
    for (std::size_t x = 0; x < n; ++x) {
      if (f[x] <= m) below.push_back(x);
      if (f[x] >= m) above.push_back(x);
    }
    sets.push_back(PointSet::of(std::move(below), n));
    sets.push_back(PointSet::of(std::move(above), n));
  }
  return sets;
}

double alpha(const MetricMeasureSpace& mm, double r, Strategy strategy,
             const FamilyOptions& options) {
  if (!(r > 0.0)) throw Error("alpha requires r > 0");
  const std::vector<double> radii{r};
  if (strategy == Strategy::Exact) return scan_exact(mm, radii).front();
  const std::size_t count = options.count ? options.count : default_family_count(mm.size());
  const LipschitzFamily family = generate_family(mm, count, options.seed);
  return scan_sets(mm, family_candidate_sets(mm, family), radii).front();
}

ConcentrationProfile alpha_profile(const MetricMeasureSpace& mm, Strategy strategy,
                                   const FamilyOptions& options) {
  if (strategy == Strategy::Exact) {
    return make_profile(mm, Strategy::Exact,
                        [&](std::span<const double> radii) { return scan_exact(mm, radii); });
  }
  const std::size_t count = options.count ? options.count : default_family_count(mm.size());
  return alpha_profile(mm, generate_family(mm, count, options.seed));
}

ConcentrationProfile alpha_profile(const MetricMeasureSpace& mm, const LipschitzFamily& family) {
  const std::vector<PointSet> sets = family_candidate_sets(mm, family);
  return make_profile(mm, Strategy::Family,
                      [&](std::span<const double> radii) { return scan_sets(mm, sets, radii); });
}

// ---------------------------------------------------------------------------

double deviation_tail(const ProbabilityMeasure& measure, std::span<const double> f, double center,
                      double t) {
  const double threshold = t - deviation_band(t);
  double m = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x)
    if (std::abs(f[x] - center) >= threshold) m += measure[x];
  return m;
}

DeviationReport deviation_check(const MetricMeasureSpace& mm, std::span<const double> f,
                                const ConcentrationProfile& profile) {
  if (profile.strategy != Strategy::Exact) {
    throw Error("deviation_check needs an exact profile; a family profile only bounds alpha from below");
  }
  const std::size_t n = mm.size();
  DeviationReport report;
  report.lipschitz = std::max(lipschitz_constant(mm.space, f), 1e-12);
  report.median = median(mm.measure, f);
  const double L = report.lipschitz;
  const double m = report.median;

  std::vector<double> radii;
  for (const auto& p : profile.points) radii.push_back(L * p.r);
  for (std::size_t x = 0; x < n; ++x) {
    const double dev = std::abs(f[x] - m);
    if (dev > 0.0) radii.push_back(dev);
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  auto record = [](InequalityResult& res, double margin, double r) {
    if (margin < res.worst_margin || (res.worst_r == 0.0 && margin <= res.worst_margin)) {
      res.worst_margin = margin;
      res.worst_r = r;
    }
    if (margin < -kMassTolerance) res.holds = false;
  };
  report.upper.worst_margin = report.lower.worst_margin = report.two_sided.worst_margin =
      std::numeric_limits<double>::infinity();

  for (double r : radii) {
    double up = 0.0, down = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      if (f[x] - m >= r) up += mm.measure[x];
      if (m - f[x] >= r) down += mm.measure[x];
    }
    const double a = profile.value_at(r / L);
    record(report.upper, a - up, r);
    record(report.lower, a - down, r);
    record(report.two_sided, 2.0 * a - (up + down), r);
  }
  for (auto* res : {&report.upper, &report.lower, &report.two_sided})
    if (std::isinf(res->worst_margin)) res->worst_margin = 0.0;
  return report;
}

// ---------------------------------------------------------------------------

double moment_norm(const MetricMeasureSpace& mm, std::span<const double> f, double q) {
  if (!(q >= 1.0)) throw Error("moment order q must be >= 1");
  const double center = mean(mm.measure, f);
  double top = 0.0;
  for (double v : f) top = std::max(top, std::abs(v - center));
  if (top == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) s += mm.measure[x] * std::pow(std::abs(f[x] - center) / top, q);
  return top * std::pow(s, 1.0 / q);
}

MomentReport check_moment_concentration(const MetricMeasureSpace& mm,
                                        const LipschitzFamily& family, double p, double q,
                                        double C) {
  if (family.empty()) throw Error("moment concentration check needs a nonempty family");
  if (!(p >= 1.0) || !(q >= 1.0)) throw Error("moment exponents must satisfy p, q >= 1");
  if (!(C > 0.0)) throw Error("moment constant C must be positive");
  MomentReport report;
  double worst = -1.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double v = std::pow(moment_norm(mm, family[i].values, q), p);
    if (v > worst) {
      worst = v;
      report.worst_member = i;
    }
  }
  report.largest_C = worst > 0.0 ? q / worst : std::numeric_limits<double>::infinity();
  report.holds = worst <= q / C;
  return report;
}

double moment_concentration_constant(const MetricMeasureSpace& mm, std::span<const double> f,
                                     double p) {
  if (!(p >= 1.0)) throw Error("moment exponent p must be >= 1");
  const double center = mean(mm.measure, f);
  double top = 0.0;
  for (double v : f) top = std::max(top, std::abs(v - center));
  if (top == 0.0) return std::numeric_limits<double>::infinity();
  const double top_p = std::pow(top, p);

  // On [q_j, q_{j+1}]: q / ||.||_q^p >= q_j / ||.||_{q_{j+1}}^p. Past q_max the
  // L-infinity bound q / top^p takes over.
  constexpr double ratio = 1.01;
  double best = std::numeric_limits<double>::infinity();
  double q = 1.0;
  for (int step = 0; step < 100000; ++step) {
    const double next = q * ratio;
    best = std::min(best, q / std::pow(moment_norm(mm, f, next), p));
    if (next / top_p >= best) return best;
    q = next;
  }
  return std::min(best, q / top_p);
}

TailDecayReport check_linear_tail_decay(const MetricMeasureSpace& mm,
                                        const LipschitzFamily& family, double C,
                                        std::span<const double> r_grid) {
  if (!(C > 0.0)) throw Error("tail-decay constant C must be positive");
  TailDecayReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& f = family[i].values;
    const double center = mean(mm.measure, f);
    for (double r : r_grid) {
      if (!(r > 0.0)) throw Error("tail-decay grid radii must be positive");
      const double margin = 1.0 / (C * r) - deviation_tail(mm.measure, f, center, r);
      if (margin < report.worst_margin) {
        report.worst_margin = margin;
        report.worst_r = r;
        report.worst_member = i;
      }
    }
  }
  if (std::isinf(report.worst_margin)) report.worst_margin = 0.0;
  report.holds = report.worst_margin >= -kMassTolerance;
  return report;
}

// ---------------------------------------------------------------------------

void TailEnvelope::add(double level, double tail_mass) {
  samples_.emplace_back(level, tail_mass);
  compacted_ = false;
}

void TailEnvelope::add_field(const ProbabilityMeasure& measure, std::span<const double> f) {
  const double center = mean(measure, f);
  std::vector<std::pair<double, double>> dev(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) dev[x] = {std::abs(f[x] - center), measure[x]};
  std::sort(dev.begin(), dev.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  double mass = 0.0;
  for (std::size_t i = 0; i < dev.size(); ++i) {
    mass += dev[i].second;
    if (i + 1 == dev.size() || dev[i + 1].first != dev[i].first) add(dev[i].first, mass);
  }
}

void TailEnvelope::merge(const TailEnvelope& other) {
  other.compact();
  samples_.insert(samples_.end(), other.samples_.begin(), other.samples_.end());
  compacted_ = false;
}

void TailEnvelope::compact() const {
  if (compacted_) return;
  std::sort(samples_.begin(), samples_.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second > b.second);
  });
  // Keep the Pareto frontier: levels descending, masses strictly increasing.
  std::vector<std::pair<double, double>> frontier;
  for (const auto& s : samples_)
    if (frontier.empty() || s.second > frontier.back().second) frontier.push_back(s);
  samples_ = std::move(frontier);
  compacted_ = true;
}

double TailEnvelope::operator()(double r) const {
  compact();
  const double threshold = r - deviation_band(std::max(r, 0.0));
  // Levels are descending; find the last sample with level >= threshold.
  auto it = std::partition_point(samples_.begin(), samples_.end(),
                                 [&](const auto& s) { return s.first >= threshold; });
  if (it == samples_.begin()) return 0.0;
  return std::prev(it)->second;
}

std::size_t TailEnvelope::size() const {
  compact();
  return samples_.size();
}

namespace {

struct ProofFieldTail {
  double forward;   ///< tail of min(d(A,.), r) at level mu(A) r
  double backward;  ///< tail of max(-d(.,A), -r) at level mu(A) r
  double out_forward;   ///< 1 - mu(B+(A,r))
  double out_backward;  ///< 1 - mu(B-(A,r))
};

ProofFieldTail proof_field_tails(const ProbabilityMeasure& mu, std::span<const double> from_set,
                                 std::span<const double> to_set, double r, double level,
                                 std::vector<double>& scratch) {
  const std::size_t n = from_set.size();
  ProofFieldTail out{};
  scratch.resize(n);
  double center = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    scratch[x] = std::min(from_set[x], r);
    center += mu[x] * scratch[x];
  }
  out.forward = deviation_tail(mu, scratch, center, level);
  center = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    scratch[x] = std::max(-to_set[x], -r);
    center += mu[x] * scratch[x];
  }
  out.backward = deviation_tail(mu, scratch, center, level);
  for (std::size_t x = 0; x < n; ++x) {
    if (reaches(from_set[x], r)) out.out_forward += mu[x];
    if (reaches(to_set[x], r)) out.out_backward += mu[x];
  }
  return out;
}

double mask_mass(const ProbabilityMeasure& mu, std::uint64_t mask) {
  double m = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mask >> i & 1U) m += mu[i];
  return m;
}

void require_exact_size(const MetricMeasureSpace& mm, const char* what) {
  if (mm.size() > kExactLimit) {
    throw Error(std::string(what) + " enumerates subsets and needs n <= " +
                std::to_string(kExactLimit));
  }
}

}  // namespace

Prop32Part1Report prop32_part1_check(const MetricMeasureSpace& mm, const TailFunction& beta,
                                     const LipschitzFamily& family,
                                     const ConcentrationProfile& exact_profile) {
  require_exact_size(mm, "prop32_part1_check");
  if (exact_profile.strategy != Strategy::Exact) throw Error("prop32_part1_check needs an exact profile");
  const std::size_t n = mm.size();
  Prop32Part1Report report;
  constexpr double inf = std::numeric_limits<double>::infinity();
  report.worst_hypothesis_margin = report.worst_enlargement_margin = report.worst_alpha_margin = inf;

  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& f = family[i].values;
    const double center = mean(mm.measure, f);
    for (double v : f) {
      const double level = std::abs(v - center);
      if (level <= 0.0) continue;
      const double margin = beta(level) - deviation_tail(mm.measure, f, center, level);
      if (margin < report.worst_hypothesis_margin) {
        report.worst_hypothesis_margin = margin;
        if (margin < -kMassTolerance && report.hypothesis_holds) {
          report.witness = "family member " + std::to_string(i) + " at level " + std::to_string(level);
        }
      }
      if (margin < -kMassTolerance) report.hypothesis_holds = false;
    }
  }

  const std::vector<double>& radii = exact_profile.distances;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  constexpr std::size_t chunk = 256;
  const std::size_t chunks = (subsets + chunk - 1) / chunk;
  struct Partial {
    double hyp = inf, concl = inf;
    std::uint64_t hyp_mask = 0, concl_mask = 0;
    double hyp_r = 0.0, concl_r = 0.0;
    std::size_t checked = 0;
  };
  std::vector<Partial> partial(chunks);
  parallel_chunks(subsets, chunk, [&](std::size_t begin, std::size_t end) {
    Partial& part = partial[begin / chunk];
    std::vector<double> scratch;
    for (std::uint64_t mask = std::max<std::uint64_t>(begin, 1); mask < end; ++mask) {
      const double a = mask_mass(mm.measure, mask);
      if (!(a > 0.0)) continue;
      ++part.checked;
      const PointSet set = PointSet::from_mask(mask, n);
      const auto from_set = distance_from_set(mm.space, set);
      const auto to_set = distance_to_set(mm.space, set);
      for (double r : radii) {
        const double level = a * r;
        const double b = beta(level);
        const ProofFieldTail t = proof_field_tails(mm.measure, from_set, to_set, r, level, scratch);
        const double hyp = std::min(b - t.forward, b - t.backward);
        const double concl = std::min(b - t.out_forward, b - t.out_backward);
        if (hyp < part.hyp) part.hyp = hyp, part.hyp_mask = mask, part.hyp_r = r;
        if (concl < part.concl) part.concl = concl, part.concl_mask = mask, part.concl_r = r;
      }
    }
  });
  Partial total;
  for (const Partial& p : partial) {
    total.checked += p.checked;
    if (p.hyp < total.hyp) total.hyp = p.hyp, total.hyp_mask = p.hyp_mask, total.hyp_r = p.hyp_r;
    if (p.concl < total.concl) {
      total.concl = p.concl, total.concl_mask = p.concl_mask, total.concl_r = p.concl_r;
    }
  }
  report.subsets_checked = total.checked;
  report.worst_hypothesis_margin = std::min(report.worst_hypothesis_margin, total.hyp);
  if (total.hyp < -kMassTolerance) {
    if (report.hypothesis_holds) {
      report.witness = "enlargement test field for subset mask " + std::to_string(total.hyp_mask) +
                       " at r = " + std::to_string(total.hyp_r);
    }
    report.hypothesis_holds = false;
  }
  report.worst_enlargement_margin = total.concl;

  for (double r : radii) {
    const double margin = beta(r / 2.0) - exact_profile.value_at(r);
    report.worst_alpha_margin = std::min(report.worst_alpha_margin, margin);
  }
  report.conclusions_hold =
      report.worst_enlargement_margin >= -kMassTolerance && report.worst_alpha_margin >= -kMassTolerance;
  if (report.hypothesis_holds && !report.conclusions_hold) {
    report.witness = total.concl < -kMassTolerance
                         ? "subset mask " + std::to_string(total.concl_mask) + " at r = " +
                               std::to_string(total.concl_r)
                         : "alpha(r) exceeds beta(r/2)";
  }
  for (double* v : {&report.worst_hypothesis_margin, &report.worst_enlargement_margin,
                    &report.worst_alpha_margin})
    if (std::isinf(*v)) *v = 0.0;
  return report;
}

TailEnvelope exact_tail_envelope(const MetricMeasureSpace& mm, const LipschitzFamily& family) {
  require_exact_size(mm, "exact_tail_envelope");
  const std::size_t n = mm.size();
  TailEnvelope envelope;
  for (const auto& member : family.members()) envelope.add_field(mm.measure, member.values);

  const std::vector<double> radii = mm.space.distinct_distances();
  const std::uint64_t subsets = std::uint64_t{1} << n;
  constexpr std::size_t chunk = 256;
  std::vector<TailEnvelope> partial((subsets + chunk - 1) / chunk);
  parallel_chunks(subsets, chunk, [&](std::size_t begin, std::size_t end) {
    TailEnvelope& env = partial[begin / chunk];
    std::vector<double> scratch;
    for (std::uint64_t mask = std::max<std::uint64_t>(begin, 1); mask < end; ++mask) {
      const double a = mask_mass(mm.measure, mask);
      if (!(a > 0.0)) continue;
      const PointSet set = PointSet::from_mask(mask, n);
      const auto from_set = distance_from_set(mm.space, set);
      const auto to_set = distance_to_set(mm.space, set);
      for (double r : radii) {
        const double level = a * r;
        const ProofFieldTail t = proof_field_tails(mm.measure, from_set, to_set, r, level, scratch);
        env.add(level, std::max(t.forward, t.backward));
      }
    }
  });
  for (const auto& env : partial) envelope.merge(env);
  return envelope;
}

// ---------------------------------------------------------------------------

Prop32Constants prop32_part2_constants(double C, double c, double p) {
  if (!(C > 0.0) || !(c > 0.0) || !(p > 0.0) || !std::isfinite(p)) {
    throw Error("prop32 constants need C, c > 0 and 0 < p < inf");
  }
  Prop32Constants k{};
  k.c_p = std::tgamma(1.0 / p + 1.0);
  k.kappa = std::min(1.0, std::pow(2.0, 1.0 - p));
  k.C_prime = std::max(C, 1.0) * std::exp(std::pow(k.c_p, p) * std::pow(C, p));
  return k;
}

Thm33Constants thm33_constants(Thm33Direction direction, double C, double c) {
  if (!(C > 0.0) || !(c > 0.0)) throw Error("thm33 constants need C, c > 0");
  if (direction == Thm33Direction::Forward) {
    const double g = std::tgamma(1.5);
    return {std::max(2.0 * C, 1.0) * std::exp(4.0 * g * g * C * C), c / 2.0};
  }
  return {C, c / 4.0};
}

double thm37_moment_bound(double C_prime, double c_prime, double q) {
  if (!(q >= 1.0)) throw Error("moment order q must be >= 1");
  if (!(C_prime > 0.0) || !(c_prime > 0.0)) throw Error("thm37 needs C', c' > 0");
  return std::sqrt(2.0 * std::numbers::pi) * C_prime *
         std::exp(1.0 / (4.0 * std::numbers::e) - 0.5) * std::sqrt(q / c_prime);
}

TailBound thm38_tail_from_moment(double C, double r) {
  if (!(C > 0.0) || !(r > 0.0)) throw Error("thm38 needs C, r > 0");
  if (r * r >= std::numbers::e / C) {
    return {TailRegime::Normal, std::exp(-C * r * r / (2.0 * std::numbers::e))};
  }
  return {TailRegime::Linear, 1.0 / (std::sqrt(C) * r)};
}

double thm39_tail_from_first_moment(double C, double p, double r) {
  if (!(C > 0.0) || !(p >= 1.0) || !(r > 0.0)) throw Error("thm39 needs C > 0, p >= 1, r > 0");
  return 1.0 / (std::pow(C, 1.0 / p) * r);
}

// ---------------------------------------------------------------------------

std::string to_string(FitModel model) { return model == FitModel::Normal ? "normal" : "exponential"; }

double ProfileFit::operator()(double r) const { return C * std::exp(-c * std::pow(r, power())); }

ProfileFit fit_profile(const ConcentrationProfile& profile, FitModel model) {
  ProfileFit fit;
  fit.model = model;
  const double p = fit.power();
  std::vector<double> xs, ys;
  double r_last = 0.0;
  for (const auto& pt : profile.points) {
    if (pt.alpha > 0.0) {
      xs.push_back(std::pow(pt.r, p));
      ys.push_back(std::log(pt.alpha));
      r_last = std::max(r_last, pt.r);
    }
  }
  if (xs.empty()) {
    fit.C = 0.5;
    fit.c = 1e12;
    fit.certified = true;
    fit.degenerate = true;
    return fit;
  }

  double C_ls = 0.0;
  double c = 0.0;
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx > 0.0) {
    const double slope = sxy / sxx;
    if (slope < 0.0 && std::isfinite(slope)) {
      c = -slope;
      C_ls = std::exp(my - slope * mx);
    }
  }
  if (!(c > 0.0)) c = 1.0 / std::pow(r_last, p);

  double C_req = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) C_req = std::max(C_req, std::exp(ys[i] + c * xs[i]));
  fit.c = c;
  fit.C = std::max(C_ls, C_req) * (1.0 + 1e-14);
  fit.certified = true;
  for (const auto& pt : profile.points)
    if (pt.alpha > fit(pt.r)) fit.certified = false;
  return fit;
}

}  // namespace ccmm
