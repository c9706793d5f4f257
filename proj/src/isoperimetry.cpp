#include "ccmm/isoperimetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace ccmm {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

struct SetView {
  double mass;
  const std::vector<double>& from;  // d(E, x)
  const std::vector<double>& to;    // d(x, E)
  std::string label;
};

using SetVisitor = std::function<void(std::size_t chain, const SetView&)>;

/// Visits candidate sets chain by chain; returns the chain count so callers
/// can size per-chain accumulators beforehand.
class SetScanner {
 public:
  SetScanner(const MetricMeasureSpace& mm, Strategy strategy, const LipschitzFamily* family)
      : mm_(mm), strategy_(strategy) {
    const std::size_t n = mm.size();
    if (strategy == Strategy::Exact) {
      if (n > kExactLimit) {
        throw Error("exact strategy requires n <= " + std::to_string(kExactLimit) + ", got " +
                    std::to_string(n));
      }
      const std::uint64_t subsets = std::uint64_t{1} << n;
      chains_ = (subsets + kMaskChunk - 1) / kMaskChunk;
      return;
    }
    for (Index p = 0; p < n; ++p) {
      orders_.push_back(sorted_by([&](Index x) { return mm.space(p, x); }));
      orders_.push_back(sorted_by([&](Index x) { return mm.space(x, p); }));
    }
    if (family) {
      for (const auto& m : family->members())
        orders_.push_back(sorted_by([&](Index x) { return m.values[x]; }));
    }
    chains_ = orders_.size();
  }

  std::size_t chains() const { return chains_; }

  void run(const SetVisitor& visit) const {
    parallel_chunks(chains_, 1, [&](std::size_t begin, std::size_t end) {
      for (std::size_t c = begin; c < end; ++c) {
        if (strategy_ == Strategy::Exact) {
          exact_chain(c, visit);
        } else {
          nested_chain(c, visit);
        }
      }
    });
  }

 private:
  static constexpr std::size_t kMaskChunk = 256;

  template <class Key>
  std::vector<Index> sorted_by(Key key) const {
    std::vector<Index> order(mm_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return key(a) < key(b); });
    return order;
  }

  void exact_chain(std::size_t c, const SetVisitor& visit) const {
    const std::size_t n = mm_.size();
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    const std::uint64_t begin = std::max<std::uint64_t>(c * kMaskChunk, 1);
    const std::uint64_t end = std::min<std::uint64_t>((c + 1) * kMaskChunk, full);
    for (std::uint64_t mask = begin; mask < end; ++mask) {
      const PointSet set = PointSet::from_mask(mask, n);
      const auto from = distance_from_set(mm_.space, set);
      const auto to = distance_to_set(mm_.space, set);
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1U) m += mm_.measure[i];
      visit(c, {m, from, to, "subset mask " + std::to_string(mask)});
    }
  }

  void nested_chain(std::size_t c, const SetVisitor& visit) const {
    const std::size_t n = mm_.size();
    const auto& order = orders_[c];
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> from(n, inf), to(n, inf);
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const Index z = order[k];
      m += mm_.measure[z];
      const auto row = mm_.space.row(z);
      for (std::size_t x = 0; x < n; ++x) {
        from[x] = std::min(from[x], row[x]);
        to[x] = std::min(to[x], mm_.space(x, z));
      }
      visit(c, {m, from, to, "chain " + std::to_string(c) + " prefix " + std::to_string(k + 1)});
    }
  }

  const MetricMeasureSpace& mm_;
  Strategy strategy_;
  std::vector<std::vector<Index>> orders_;
  std::size_t chains_ = 0;
};

/// Mass strictly gained by the open enlargement at radius s.
double gained_mass(const ProbabilityMeasure& mu, std::span<const double> dist, double s) {
  double g = 0.0;
  for (std::size_t x = 0; x < dist.size(); ++x)
    if (dist[x] > 0.0 && !reaches(dist[x], s)) g += mu[x];
  return g;
}

double enlarged_mass(const ProbabilityMeasure& mu, std::span<const double> dist, double r) {
  double g = 0.0;
  for (std::size_t x = 0; x < dist.size(); ++x)
    if (!reaches(dist[x], r)) g += mu[x];
  return g;
}

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson(F f, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  // relative floor: below it the recursion only chases rounding noise
  const double floor = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(left + right);
  if (depth <= 0 || std::abs(delta) <= 15.0 * std::max(tol, floor)) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

template <class F>
double integrate(F f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return adaptive_simpson(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 40);
}

double density(double b) { return kInvSqrt2Pi * std::exp(-0.5 * b * b); }

}  // namespace

MinkowskiContent minkowski_content(const MetricMeasureSpace& mm, const PointSet& E, double scale) {
  if (E.empty()) throw Error("minkowski_content needs a nonempty set");
  if (!(scale > 0.0)) throw Error("minkowski_content needs scale > 0");
  MinkowskiContent c{0.0, 0.0, scale};
  if (E.size() == mm.size()) return c;
  c.forward = gained_mass(mm.measure, distance_from_set(mm.space, E), scale) / scale;
  c.backward = gained_mass(mm.measure, distance_to_set(mm.space, E), scale) / scale;
  return c;
}

std::vector<IsoperimetricPoint> isoperimetric_profile(const MetricMeasureSpace& mm, double scale,
                                                      Strategy strategy,
                                                      const LipschitzFamily* family) {
  if (!(scale > 0.0)) throw Error("isoperimetric_profile needs scale > 0");
  const SetScanner scanner(mm, strategy, family);
  std::vector<std::vector<IsoperimetricPoint>> per_chain(scanner.chains());
  scanner.run([&](std::size_t chain, const SetView& s) {
    const double f = gained_mass(mm.measure, s.from, scale) / scale;
    const double b = gained_mass(mm.measure, s.to, scale) / scale;
    per_chain[chain].push_back({s.mass, std::min(f, b)});
  });
  std::vector<IsoperimetricPoint> all{{0.0, 0.0}, {1.0, 0.0}};
  for (const auto& v : per_chain) all.insert(all.end(), v.begin(), v.end());
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.mass < b.mass || (a.mass == b.mass && a.content < b.content);
  });
  std::vector<IsoperimetricPoint> out;
  for (const auto& p : all) {
    if (!out.empty() && p.mass - out.back().mass <= kMassTolerance) {
      out.back().content = std::min(out.back().content, p.content);
    } else {
      out.push_back(p);
    }
  }
  // Masses within tolerance of 1 are the full space.
  if (out.size() > 1 && out.back().mass >= 1.0 - kMassTolerance) out.back() = {1.0, 0.0};
  return out;
}

double gaussian_phi_prime(double t) { return density(t); }

namespace {

constexpr double kPanel = 1.0 / 32.0;
constexpr std::size_t kPanels = 1280;  // covers [0, 40]

double panel_tolerance(double a, double b) {
  return std::max(1e-300, 1e-16 * density(std::max(std::abs(a), std::abs(b))) * (b - a));
}

// tails[k] = integral of the density over [k h, 40]; summed from the right.
const std::vector<double>& tail_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kPanels + 1, 0.0);
    long double acc = 0.0L;
    for (std::size_t k = kPanels; k-- > 0;) {
      const double a = k * kPanel, b = (k + 1) * kPanel;
      acc += integrate(density, a, b, panel_tolerance(a, b));
      t[k] = static_cast<double>(acc);
    }
    return t;
  }();
  return table;
}

}  // namespace

double gaussian_tail(double t) {
  if (t < 0.0) return 1.0 - gaussian_tail(-t);
  if (t >= kPanels * kPanel) return integrate(density, t, t + 40.0, panel_tolerance(t, t + 40.0));
  const auto k = static_cast<std::size_t>(t / kPanel);
  const double b = (k + 1) * kPanel;
  return tail_table()[k + 1] + integrate(density, t, b, panel_tolerance(t, b));
}

double gaussian_phi(double t) {
  if (t >= 0.0) return 1.0 - gaussian_tail(t);
  return gaussian_tail(-t);
}

double gaussian_phi_inv(double v) {
  if (!(v > 0.0 && v < 1.0)) throw Error("gaussian_phi_inv needs v in (0, 1)");
  if (v == 0.5) return 0.0;
  // Solve gaussian_tail(s) = q for s >= 0 on the smaller side.
  const double q = std::min(v, 1.0 - v);
  double lo = 0.0, hi = 1.0;
  while (gaussian_tail(hi) > q) lo = hi, hi *= 2.0;
  while (hi - lo > 1e-2) {
    const double mid = 0.5 * (lo + hi);
    if (gaussian_tail(mid) > q) lo = mid; else hi = mid;
  }
  double s = 0.5 * (lo + hi);
  for (int i = 0; i < 50; ++i) {
    const double step = (gaussian_tail(s) - q) / density(s);
    if (!std::isfinite(step)) break;
    const double next = std::clamp(s + step, lo, hi);
    const bool done = std::abs(next - s) <= 1e-12 * std::max(1.0, s);
    s = next;
    if (done) break;
  }
  return v < 0.5 ? -s : s;
}

Lemma51Report lemma51_check(const MetricMeasureSpace& mm, double scale, std::span<const double> r_grid,
                            double K) {
  if (!(scale > 0.0)) throw Error("lemma51_check needs scale > 0");
  if (!(K > 0.0)) throw Error("lemma51_check needs K > 0");
  const std::size_t n = mm.size();
  Lemma51Report report;
  report.strategy = n <= kExactLimit ? Strategy::Exact : Strategy::Family;
  report.scale = scale;
  report.K = K;
  const double root_k = std::sqrt(K);
  auto phi_k_inv = [&](double m) { return gaussian_phi_inv(m) / root_k; };
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double top = 1.0 - kMassTolerance;

  const SetScanner scanner(mm, report.strategy, nullptr);
  struct Partial {
    double hyp = inf, concl = inf;
    std::string hyp_label, concl_label;
    std::size_t count = 0;
  };
  std::vector<Partial> partial(scanner.chains());
  scanner.run([&](std::size_t chain, const SetView& s) {
    if (!(s.mass > kMassTolerance) || s.mass >= top) return;
    Partial& p = partial[chain];
    ++p.count;
    const double content = std::min(gained_mass(mm.measure, s.from, scale),
                                    gained_mass(mm.measure, s.to, scale)) / scale;
    const double hyp = content - root_k * density(gaussian_phi_inv(s.mass));
    if (hyp < p.hyp) p.hyp = hyp, p.hyp_label = s.label;
    const double base = phi_k_inv(s.mass);
    for (double r : r_grid) {
      for (const auto* dist : {&s.from, &s.to}) {
        const double m = enlarged_mass(mm.measure, *dist, r);
        if (m >= top) continue;
        const double margin = phi_k_inv(m) - base - r + scale;
        if (margin < p.concl) p.concl = margin, p.concl_label = s.label + " at r = " + std::to_string(r);
      }
    }
  });
  Partial total;
  for (const Partial& p : partial) {
    total.count += p.count;
    if (p.hyp < total.hyp) total.hyp = p.hyp, total.hyp_label = p.hyp_label;
    if (p.concl < total.concl) total.concl = p.concl, total.concl_label = p.concl_label;
  }
  report.sets_checked = total.count;
  report.hypothesis_worst_margin = std::isinf(total.hyp) ? 0.0 : total.hyp;
  report.hypothesis_holds = total.hyp >= -kMassTolerance;
  report.worst_margin = std::isinf(total.concl) ? 0.0 : total.concl;
  if (!report.hypothesis_holds) {
    report.witness = "hypothesis not satisfied: " + total.hyp_label;
    return report;
  }
  report.asserted = true;
  report.holds = report.worst_margin >= -1e-9;
  if (!report.holds) report.witness = total.concl_label;
  return report;
}

double lemma52_bound(double r, double K) {
  if (!(K > 0.0)) throw Error("lemma52_bound needs K > 0");
  return gaussian_tail(std::sqrt(K) * r);
}

double thm54_bound(double K, double r) {
  if (!(K > 0.0)) throw Error("thm54_bound needs K > 0");
  return 0.5 * std::exp(-0.5 * K * r * r);
}

double cor55_bound(double K, double epsilon) {
  if (!(K > 0.0)) throw Error("cor55_bound needs K > 0");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("epsilon must lie in (0, 1)");
  return 2.0 * std::sqrt(2.0 / K * std::log(1.0 / epsilon));
}

}  // namespace ccmm
