#include "ccmm/verify.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ccmm/concentration.hpp"
#include "ccmm/isoperimetry.hpp"
#include "ccmm/observable.hpp"

namespace ccmm {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
    case Status::Skipped: return "skipped";
  }
  return "skipped";
}

const std::vector<std::string>& verify_ids() {
  static const std::vector<std::string> ids{"mf3",  "prop32.1", "prop32.2", "thm33", "thm37", "thm38",
                                            "thm39", "thm41",   "obnor",    "obex",  "lem51", "lem52",
                                            "thm54", "cor55",   "thm61",    "gm_recursion", "cor62", "thm63"};
  return ids;
}

std::string section_of(const std::string& id) {
  static const std::vector<std::pair<std::string, std::string>> table{
      {"mf3", "sec3"},   {"prop32.1", "sec3"}, {"prop32.2", "sec3"}, {"thm33", "sec3"},
      {"thm37", "sec3"}, {"thm38", "sec3"},    {"thm39", "sec3"},    {"thm41", "sec4"},
      {"obnor", "sec4"}, {"obex", "sec4"},     {"lem51", "sec5"},    {"lem52", "sec5"},
      {"thm54", "sec5"}, {"cor55", "sec5"},    {"thm61", "sec6"},    {"gm_recursion", "sec6"},
      {"cor62", "sec6"}, {"thm63", "sec6"}};
  for (const auto& [k, v] : table)
    if (k == id) return v;
  throw Error("unknown verify id '" + id + "'");
}

bool VerifyReport::any_fail() const {
  for (const auto& [id, r] : results)
    if (r.status == Status::Fail) return true;
  return false;
}

const CheckResult& VerifyReport::at(const std::string& id) const {
  for (const auto& [k, r] : results)
    if (k == id) return r;
  throw Error("report has no entry '" + id + "'");
}

Json VerifyReport::to_json() const {
  Json meta;
  meta["tool"] = "ccmm";
  meta["version"] = kVersion;
  meta["seed"] = seed;
  meta["space_hash"] = space_hash;
  meta["n"] = n;
  meta["sections"] = sections;
  Json res = Json::object();
  for (const auto& [id, r] : results) {
    Json e;
    e["status"] = to_string(r.status);
    e["margin"] = std::isfinite(r.margin) ? Json(r.margin) : Json(nullptr);
    e["notes"] = r.notes;
    if (!r.witness.is_null()) e["witness"] = r.witness;
    res[id] = std::move(e);
  }
  Json j;
  j["metadata"] = std::move(meta);
  j["results"] = std::move(res);
  return j;
}

std::string VerifyReport::to_csv() const {
  std::string out = "id,status,margin,notes\n";
  for (const auto& [id, r] : results) {
    std::string notes = r.notes;
    for (char& c : notes)
      if (c == '"') c = '\'';
    out += id + "," + to_string(r.status) + "," + format_double(r.margin) + ",\"" + notes + "\"\n";
  }
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const std::vector<double> kEpsilonGrid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

std::string num(double v) { return format_double(v); }

/// Running minimum of rhs - lhs with the witness of the worst case.
struct Worst {
  double margin = kInf;
  bool failed = false;
  Json witness;

  void add(double lhs, double rhs, double tolerance, const std::function<Json()>& describe) {
    const double m = rhs - lhs;
    const bool bad = m < -tolerance;
    if (bad && !failed) {
      failed = true;
      witness = describe();
      witness["lhs"] = lhs;
      witness["rhs"] = rhs;
    }
    if (m < margin) margin = m;
  }
  double finite_margin() const { return std::isfinite(margin) ? margin : 0.0; }
};

CheckResult skipped(std::string why) { return {Status::Skipped, 0.0, std::move(why), nullptr}; }

CheckResult verdict(const Worst& w, const std::string& notes, Status on_fail = Status::Fail) {
  CheckResult r;
  r.margin = w.finite_margin();
  r.notes = notes;
  if (w.failed) {
    r.status = on_fail;
    r.witness = w.witness;
  } else {
    r.status = Status::Pass;
  }
  return r;
}

double tail_tolerance(double rhs) { return 1e-12 + 1e-9 * std::abs(rhs); }

/// Checks mean-deviation tails of every member against a non-increasing bound
/// at each attained deviation level.
void check_mean_tails(const MetricMeasureSpace& mm, const LipschitzFamily& family,
                      const std::function<double(double)>& bound, Worst& worst,
                      double relative_slack = 1e-9) {
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& f = family[i].values;
    const double center = mean(mm.measure, f);
    std::vector<double> levels;
    for (double v : f)
      if (std::abs(v - center) > 0.0) levels.push_back(std::abs(v - center));
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (double v : levels) {
      const double rhs = bound(v);
      const double lhs = deviation_tail(mm.measure, f, center, v);
      worst.add(lhs, rhs, 1e-12 + relative_slack * std::abs(rhs), [&] {
        return Json{{"member", i}, {"origin", to_string(family[i].origin)}, {"r", v}};
      });
    }
  }
}

class Suite {
 public:
  Suite(const MetricMeasureSpace& mm, const VerifyOptions& opt)
      : mm_(mm),
        opt_(opt),
        exact_(mm.size() <= kExactLimit),
        family_(generate_family(mm, opt.family_count ? opt.family_count : default_family_count(mm.size()),
                                opt.seed)),
        profile_(exact_ ? alpha_profile(mm, Strategy::Exact) : alpha_profile(mm, family_)) {
    scale_ = opt.scale > 0.0 ? opt.scale : 1.000001 * mm.space.mesh_step();
    if (opt.certified && opt.certified->K > 0.0) K_ = opt.certified->K;
  }

  CheckResult run(const std::string& id) {
    if (id == "mf3") return mf3();
    if (id == "prop32.1") return prop32_1();
    if (id == "prop32.2") return prop32_2();
    if (id == "thm33") return thm33();
    if (id == "thm37") return thm37();
    if (id == "thm38") return thm38();
    if (id == "thm39") return thm39();
    if (id == "thm41") return thm41();
    if (id == "obnor") return obs_fit(FitModel::Normal);
    if (id == "obex") return obs_fit(FitModel::Exponential);
    if (id == "lem51") return lem51();
    if (id == "lem52") return lem52();
    if (id == "thm54") return thm54();
    if (id == "cor55") return cor55();
    if (id == "thm61") return thm61();
    if (id == "gm_recursion") return gm();
    if (id == "cor62") return cor62();
    if (id == "thm63") return thm63();
    throw Error("unknown verify id '" + id + "'");
  }

 private:
  std::string exact_only() const {
    return "needs the exact concentration function; n = " + std::to_string(mm_.size()) + " > " +
           std::to_string(kExactLimit);
  }

  const ProfileFit& fit(FitModel model) {
    auto& slot = model == FitModel::Normal ? normal_fit_ : exp_fit_;
    if (!slot) slot = fit_profile(profile_, model);
    return *slot;
  }

  double obsdiam(double eps) {
    for (const auto& [e, v] : obsdiam_cache_)
      if (e == eps) return v;
    const double v = observable_diameter(mm_, eps, family_).value;
    obsdiam_cache_.emplace_back(eps, v);
    return v;
  }

  const EigenEstimate& eigen() {
    if (!eigen_) eigen_ = first_eigenvalue(mm_, opt_.restarts, opt_.seed);
    return *eigen_;
  }

  CheckResult mf3() {
    if (!exact_) return skipped(exact_only());
    Worst w;
    for (std::size_t i = 0; i < family_.size(); ++i) {
      const DeviationReport d = deviation_check(mm_, family_[i].values, profile_);
      const std::pair<const char*, const InequalityResult*> parts[] = {
          {"upper", &d.upper}, {"lower", &d.lower}, {"two-sided", &d.two_sided}};
      for (const auto& [name, res] : parts) {
        if (!res->holds && !w.failed) {
          w.failed = true;
          w.witness = {{"member", i}, {"inequality", name}, {"r", res->worst_r}, {"margin", res->worst_margin}};
        }
        w.margin = std::min(w.margin, res->worst_margin);
      }
    }
    return verdict(w, "median deviations against the exact concentration function, " +
                          std::to_string(family_.size()) + " family members");
  }

  CheckResult prop32_1() {
    if (!exact_) return skipped(exact_only());
    const TailEnvelope envelope = exact_tail_envelope(mm_, family_);
    const Prop32Part1Report r =
        prop32_part1_check(mm_, [&](double t) { return envelope(t); }, family_, profile_);
    CheckResult out;
    out.margin = std::min(r.worst_enlargement_margin, r.worst_alpha_margin);
    std::string notes = "beta = tail envelope over the family and the truncated set-distance fields; " +
                        std::to_string(r.subsets_checked) + " subsets; hypothesis measured on finitely many "
                        "fields (necessary only)";
    if (!r.hypothesis_holds) {
      out.status = Status::Skipped;
      out.notes = "hypothesis not satisfied; conclusions not asserted. " + notes;
      return out;
    }
    out.status = r.conclusions_hold ? Status::Pass : Status::Fail;
    out.notes = notes;
    if (!r.conclusions_hold) out.witness = {{"detail", r.witness}};
    return out;
  }

  CheckResult prop32_2() {
    if (!exact_) return skipped(exact_only());
    const ProfileFit& f = fit(FitModel::Exponential);
    const double B = 2.0 * f.C;
    const Prop32Constants k = prop32_part2_constants(B, f.c, 1.0);
    const double beta_bar = B / f.c;
    Worst w;
    check_mean_tails(mm_, family_, [&](double r) { return k.C_prime * std::exp(-k.kappa * f.c * r); }, w);
    check_mean_tails(mm_, family_, [&](double v) {
      const double r = v - beta_bar;
      return r > 0.0 ? B * std::exp(-f.c * r) : kInf;
    }, w);
    return verdict(w, "beta(r) = 2C exp(-c r) from the certified exponential fit C = " + num(f.C) +
                          ", c = " + num(f.c) + "; C' = " + num(k.C_prime));
  }

  CheckResult thm33() {
    if (!exact_) return skipped(exact_only());
    const ProfileFit& f = fit(FitModel::Normal);
    const Thm33Constants fw = thm33_constants(Thm33Direction::Forward, f.C, f.c);
    const Thm33Constants bw = thm33_constants(Thm33Direction::Backward, fw.C, fw.c);
    Worst w;
    check_mean_tails(mm_, family_, [&](double r) { return fw.C * std::exp(-fw.c * r * r); }, w);
    for (double d : profile_.distances) {
      const double rhs = bw.C * std::exp(-bw.c * d * d);
      w.add(profile_.value_at(d), rhs, tail_tolerance(rhs), [&] { return Json{{"direction", "backward"}, {"r", d}}; });
    }
    return verdict(w, "normal fit C = " + num(f.C) + ", c = " + num(f.c) + "; forward C' = " + num(fw.C) +
                          ", c' = " + num(fw.c) + "; backward c = " + num(bw.c));
  }

  CheckResult thm37() {
    if (!exact_) return skipped(exact_only());
    const ProfileFit& f = fit(FitModel::Normal);
    const Thm33Constants fw = thm33_constants(Thm33Direction::Forward, f.C, f.c);
    Worst w;
    for (double q : {1.0, 2.0, 4.0, 8.0}) {
      const double rhs = thm37_moment_bound(fw.C, fw.c, q);
      for (std::size_t i = 0; i < family_.size(); ++i) {
        const double lhs = moment_norm(mm_, family_[i].values, q);
        w.add(lhs, rhs, tail_tolerance(rhs), [&] { return Json{{"member", i}, {"q", q}}; });
      }
    }
    return verdict(w, "q in {1, 2, 4, 8} with C' = " + num(fw.C) + ", c' = " + num(fw.c));
  }

  CheckResult thm38() {
    Worst w;
    std::size_t used = 0;
    for (std::size_t i = 0; i < family_.size(); ++i) {
      const double C = moment_concentration_constant(mm_, family_[i].values, 2.0);
      if (!std::isfinite(C)) continue;
      ++used;
      LipschitzFamily single(mm_.space, {family_[i]});
      check_mean_tails(mm_, single, [&](double r) { return thm38_tail_from_moment(C, r).bound; }, w, 1e-6);
      if (w.failed && !w.witness.contains("member")) w.witness["member"] = i;
    }
    return verdict(w, "per-member certified (2, q)-moment constants, " + std::to_string(used) + " members");
  }

  CheckResult thm39() {
    Worst w;
    for (double p : {1.0, 2.0}) {
      for (std::size_t i = 0; i < family_.size(); ++i) {
        const double m1 = moment_norm(mm_, family_[i].values, 1.0);
        if (!(m1 > 0.0)) continue;
        const double C = 1.0 / std::pow(m1, p);
        LipschitzFamily single(mm_.space, {family_[i]});
        check_mean_tails(mm_, single, [&](double r) { return thm39_tail_from_first_moment(C, p, r); }, w, 1e-9);
        if (w.failed && !w.witness.contains("p")) w.witness["p"] = p, w.witness["member"] = i;
      }
    }
    return verdict(w, "largest admissible C per member, p in {1, 2}");
  }

  CheckResult thm41() {
    if (!exact_) return skipped(exact_only());
    Worst w;
    for (double eps : kEpsilonGrid) {
      const double rhs = 2.0 * alpha_inverse(profile_, eps / 2.0);
      w.add(obsdiam(eps), rhs, tie_band(rhs), [&] { return Json{{"epsilon", eps}}; });
    }
    return verdict(w, "family observable diameter (a lower bound, so a pass is necessary only), epsilon 0.1..0.9");
  }

  CheckResult obs_fit(FitModel model) {
    if (!exact_) return skipped(exact_only());
    const ProfileFit& f = fit(model);
    if (f.degenerate) return skipped("concentration function vanishes identically");
    Worst w;
    for (double eps : kEpsilonGrid) {
      const double rhs = model == FitModel::Normal ? obsdiam_bound_normal(f.C, f.c, eps)
                                                   : obsdiam_bound_exponential(f.C, f.c, eps);
      w.add(obsdiam(eps), rhs, tie_band(rhs), [&] { return Json{{"epsilon", eps}}; });
    }
    return verdict(w, to_string(model) + " fit C = " + num(f.C) + ", c = " + num(f.c));
  }

  std::vector<double> radius_grid() const {
    const double d = profile_.diameter();
    return {d / 16.0, d / 8.0, d / 4.0, 3.0 * d / 8.0, d / 2.0};
  }

  const Lemma51Report& lemma51() {
    if (!lemma51_) lemma51_ = lemma51_check(mm_, scale_, radius_grid(), K_ > 0.0 ? K_ : 1.0);
    return *lemma51_;
  }

  CheckResult lem51() {
    const Lemma51Report& r = lemma51();
    const std::string base = "scale " + num(scale_) + ", K = " + num(r.K) + ", " + to_string(r.strategy) +
                             " set scan over " + std::to_string(r.sets_checked) + " sets";
    if (!r.hypothesis_holds) {
      return skipped("comparison hypothesis not satisfied at this scale (worst margin " +
                     num(r.hypothesis_worst_margin) + "); no assertion made; " + base);
    }
    CheckResult out{r.holds ? Status::Pass : Status::Fail, r.worst_margin, base, nullptr};
    if (!r.holds) out.witness = {{"detail", r.witness}};
    return out;
  }

  CheckResult lem52() {
    double K = K_;
    std::string source = "catalog certificate";
    if (!(K > 0.0)) {
      if (!lemma51().hypothesis_holds) {
        return skipped("no curvature certificate and the comparison hypothesis fails at scale " + num(scale_));
      }
      K = lemma51().K;
      source = "measured comparison hypothesis";
    }
    const double slack = scale_ * std::sqrt(K) / std::sqrt(2.0 * std::numbers::pi);
    Worst w;
    for (const auto& p : profile_.points) {
      if (!(p.r > 0.0)) continue;
      const double rhs = lemma52_bound(p.r, K) + slack;
      w.add(p.alpha, rhs, tail_tolerance(rhs), [&] { return Json{{"r", p.r}}; });
    }
    return verdict(w, "K = " + num(K) + " from " + source + "; " + to_string(profile_.strategy) +
                          " profile; slack " + num(slack) + " (one scale step)");
  }

  CheckResult thm54() {
    if (!(K_ > 0.0)) return skipped("needs a certified K > 0");
    Worst w;
    for (const auto& p : profile_.points) {
      if (!(p.r > 0.0)) continue;
      const double rhs = 1.25 * thm54_bound(K_, p.r);
      w.add(p.alpha, rhs, tail_tolerance(rhs), [&] { return Json{{"r", p.r}}; });
    }
    return verdict(w, "K = " + num(K_) + ", slack 0.25, " + to_string(profile_.strategy) + " profile");
  }

  CheckResult cor55() {
    if (!(K_ > 0.0)) return skipped("needs a certified K > 0");
    Worst w;
    for (double eps : kEpsilonGrid) {
      const double rhs = cor55_bound(K_, eps);
      w.add(obsdiam(eps), rhs, tie_band(rhs), [&] { return Json{{"epsilon", eps}}; });
    }
    return verdict(w, "K = " + num(K_) + ", family observable diameter, epsilon 0.1..0.9");
  }

  CheckResult thm61() {
    const double lambda = eigen().value;
    if (!(lambda > 0.0)) return skipped("estimated first eigenvalue is zero");
    Worst w;
    for (const auto& p : profile_.points) {
      if (!(p.r > 0.0)) continue;
      const double rhs = thm61_bound(lambda, p.r);
      w.add(p.alpha, rhs, tail_tolerance(rhs), [&] { return Json{{"r", p.r}}; });
    }
    return verdict(w, "lambda1 estimate " + num(lambda) + " (an upper bound, so a failure is inconclusive: tighten lambda1)",
                   Status::Inconclusive);
  }

  CheckResult gm() {
    const double lambda = eigen().value;
    if (!(lambda > 0.0)) return skipped("estimated first eigenvalue is zero");
    const double eps = std::sqrt(2.0 / lambda);
    const std::vector<double> f = distance_from_point(mm_.space, 0);
    const double m = median(mm_.measure, f);
    std::vector<Index> members;
    for (std::size_t x = 0; x < mm_.size(); ++x)
      if (f[x] <= m) members.push_back(x);
    const GmReport r = gm_recursion_check(mm_, PointSet::of(members, mm_.size()), eps);
    CheckResult out;
    out.status = r.passed ? Status::Pass : Status::Fail;
    out.margin = r.worst_margin;
    out.notes = "epsilon = sqrt(2 / lambda1) = " + num(eps) + "; " + std::to_string(r.conclusive_steps) +
                " steps met the energy premise, " + std::to_string(r.inconclusive_steps) +
                " did not and were not asserted; " + r.terminated;
    if (!r.passed) {
      for (const auto& s : r.steps) {
        if (s.premise && !s.holds) {
          out.witness = {{"step", s.k}, {"a", s.a}, {"b", s.b}, {"bound", s.bound}, {"lambda_f", s.lambda_f}};
          break;
        }
      }
    }
    return out;
  }

  CheckResult cor62() {
    const double lambda = eigen().value;
    if (!(lambda > 0.0)) return skipped("estimated first eigenvalue is zero");
    Worst w;
    for (double eps : kEpsilonGrid) {
      const double rhs = cor62_bound(lambda, eps);
      w.add(obsdiam(eps), rhs, tie_band(rhs), [&] { return Json{{"epsilon", eps}}; });
    }
    return verdict(w, "lambda1 estimate " + num(lambda) + " (an upper bound, so a failure is inconclusive: tighten lambda1)",
                   Status::Inconclusive);
  }

  CheckResult thm63() {
    std::optional<ChengInputs> in = opt_.cheng;
    if (!in && opt_.certified && opt_.certified->dim >= 2 && opt_.certified->D > 0.0) {
      in = ChengInputs{opt_.certified->dim, opt_.certified->a, opt_.certified->K, opt_.certified->D};
    }
    if (!in) return skipped("needs Cheng inputs (n, a, K, D) from a certificate or --cheng");
    const double lambda = eigen().value;
    const double bound = cheng_upper_bound(*in);
    Worst w;
    w.add(lambda, bound, tie_band(bound), [&] { return Json{{"lambda1", lambda}}; });
    return verdict(w, "lambda1 * D^2 = " + num(lambda * in->D * in->D) + " against " + num(bound * in->D * in->D) +
                          " (n = " + std::to_string(in->n) + ", a = " + num(in->a) + ", K = " + num(in->K) +
                          ", D = " + num(in->D) + ")");
  }

  const MetricMeasureSpace& mm_;
  const VerifyOptions& opt_;
  bool exact_;
  LipschitzFamily family_;
  ConcentrationProfile profile_;
  double scale_ = 0.0;
  double K_ = 0.0;
  std::optional<ProfileFit> normal_fit_, exp_fit_;
  std::optional<EigenEstimate> eigen_;
  std::optional<Lemma51Report> lemma51_;
  std::vector<std::pair<double, double>> obsdiam_cache_;
};

}  // namespace

VerifyReport run_verify(const MetricMeasureSpace& mm, const VerifyOptions& options) {
  for (const auto& s : options.sections) {
    if (s != "sec3" && s != "sec4" && s != "sec5" && s != "sec6") throw Error("unknown section '" + s + "'");
  }
  VerifyReport report;
  report.seed = options.seed;
  report.space_hash = space_hash(mm);
  report.n = mm.size();
  report.sections.assign(options.sections.begin(), options.sections.end());
  Suite suite(mm, options);
  for (const auto& id : verify_ids()) {
    if (!options.sections.count(section_of(id))) {
      report.results.emplace_back(id, skipped("section " + section_of(id) + " not requested"));
      continue;
    }
    report.results.emplace_back(id, suite.run(id));
  }
  return report;
}

}  // namespace ccmm
