#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ccmm/concentration.hpp"
#include "ccmm/finsler.hpp"
#include "ccmm/io.hpp"
#include "ccmm/isoperimetry.hpp"
#include "ccmm/observable.hpp"
#include "ccmm/spectrum.hpp"
#include "ccmm/verify.hpp"

using namespace ccmm;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string out;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
  } else {
    write_text_file(g.out, text);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

bool is_catalog_id(const std::string& s) {
  if (std::filesystem::exists(s)) return false;
  for (const auto& e : catalog())
    if (e.id == s) return true;
  return false;
}

LoadedSpace load_target(const std::string& target, std::size_t resolution) {
  if (is_catalog_id(target)) {
    const CatalogEntry entry = catalog_entry(target, resolution);
    BuiltSpace b = build_space(entry);
    return {std::move(b.mm), entry.certified};
  }
  return load_space(target);
}

LipschitzFamily family_for(const MetricMeasureSpace& mm, const std::string& path, std::size_t count,
                           std::uint64_t seed) {
  if (!path.empty()) return family_from_json(read_json_file(path), mm.space);
  return generate_family(mm, count ? count : default_family_count(mm.size()), seed);
}

ChengInputs parse_cheng(const std::string& s) {
  std::vector<double> v;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    char* end = nullptr;
    const double x = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw CLI::ValidationError("--cheng", "expected n,a,K,D");
    v.push_back(x);
  }
  if (v.size() != 4) throw CLI::ValidationError("--cheng", "expected four values n,a,K,D");
  return {static_cast<int>(v[0]), v[1], v[2], v[3]};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concentration of measure on finite irreversible metric measure spaces"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "random seed")->default_val(0);
  app.add_option("--threads", g.threads, "worker threads (default: CCMM_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output path (default: stdout)");

  int exit_code = 0;

  // gen
  auto* gen = app.add_subcommand("gen", "write a space file");
  std::string gen_catalog, gen_spec;
  std::size_t gen_resolution = 0, gen_n = 0;
  double gen_density = 0.4;
  gen->add_option("--catalog", gen_catalog, "catalog id (g1, t2, r1, s2, c1)");
  gen->add_option("--resolution", gen_resolution, "grid resolution (0: catalog default)");
  gen->add_option("--spec", gen_spec, "declarative spec file");
  gen->add_option("--random", gen_n, "random digraph space with this many points");
  gen->add_option("--density", gen_density, "arc probability for --random")->check(CLI::Range(0.0, 1.0));
  const std::function<void()> run_gen = [&] {
    const int chosen = !gen_catalog.empty() + !gen_spec.empty() + (gen_n > 0);
    if (chosen != 1) throw CLI::ValidationError("gen", "give exactly one of --catalog, --spec, --random");
    if (gen_n > 0) {
      emit(g, dump(space_to_json(random_space(gen_n, g.seed, gen_density))));
      return;
    }
    CatalogEntry entry;
    if (!gen_catalog.empty()) {
      entry = catalog_entry(gen_catalog, gen_resolution);
    } else {
      entry = parse_catalog_spec(read_json_file(gen_spec));
      if (gen_resolution) entry.spec.resolution = gen_resolution;
    }
    const BuiltSpace b = build_space(entry);
    Json j = space_to_json(b.mm, entry.certified);
    j["chordal_bound"] = b.chordal_bound;
    emit(g, dump(j));
  };

  // validate
  auto* val = app.add_subcommand("validate", "check a space file");
  std::string val_path;
  bool val_sampled = false;
  val->add_option("space", val_path, "space file")->required();
  val->add_flag("--sampled", val_sampled, "check 10 n^2 random triples");
  const std::function<void()> run_val = [&] {
    const Json j = read_json_file(val_path);
    if (j.contains("dist") && !j["dist"].is_null()) {
      DistanceMatrix m;
      for (const auto& row : j["dist"]) m.push_back(row.get<std::vector<double>>());
      ValidateOptions opt;
      opt.sampled = val_sampled;
      opt.seed = g.seed;
      const ValidationReport r = validate(m, opt);
      if (!r.valid) {
        emit(g, "invalid\n" + r.summary() + "\n");
        exit_code = 1;
        return;
      }
    }
    const LoadedSpace s = parse_space(j);
    std::ostringstream os;
    os << "valid n=" << s.mm.size() << " symmetric=" << (s.mm.space.is_symmetric() ? "yes" : "no")
       << " diameter=" << format_double(diameter(s.mm.space)) << " hash=" << space_hash(s.mm) << "\n";
    emit(g, os.str());
  };

  // family
  auto* fam = app.add_subcommand("family", "generate a certified 1-Lipschitz family");
  std::string fam_path;
  std::size_t fam_count = 0;
  fam->add_option("space", fam_path, "space file")->required();
  fam->add_option("--count", fam_count, "members (default 2n + 32)");
  const std::function<void()> run_fam = [&] {
    const LoadedSpace s = load_space(fam_path);
    emit(g, dump(family_to_json(family_for(s.mm, "", fam_count, g.seed))));
  };

  // alpha
  auto* alp = app.add_subcommand("alpha", "concentration function profile as CSV");
  std::string alp_path, alp_strategy = "exact", alp_family;
  std::size_t alp_count = 0;
  alp->add_option("space", alp_path, "space file")->required();
  alp->add_option("--strategy", alp_strategy, "exact or family")->check(CLI::IsMember({"exact", "family"}));
  alp->add_option("--family", alp_family, "family file for the family strategy");
  alp->add_option("--count", alp_count, "generated family size");
  const std::function<void()> run_alp = [&] {
    const LoadedSpace s = load_space(alp_path);
    if (strategy_from_string(alp_strategy) == Strategy::Exact) {
      emit(g, profile_to_csv(alpha_profile(s.mm, Strategy::Exact)));
    } else {
      emit(g, profile_to_csv(alpha_profile(s.mm, family_for(s.mm, alp_family, alp_count, g.seed))));
    }
  };

  // obsdiam
  auto* obs = app.add_subcommand("obsdiam", "observable diameter lower bound");
  std::string obs_path, obs_family;
  double obs_kappa = 0.1;
  obs->add_option("space", obs_path, "space file")->required();
  obs->add_option("--kappa", obs_kappa, "kappa in (0, 1)")->check(CLI::Range(0.0, 1.0));
  obs->add_option("--family", obs_family, "family file (default: generated)");
  const std::function<void()> run_obs = [&] {
    const LoadedSpace s = load_space(obs_path);
    const LipschitzFamily fam = family_for(s.mm, obs_family, 0, g.seed);
    const ObsDiamResult r = observable_diameter(s.mm, obs_kappa, fam);
    const PartialDiameter pd = partial_diameter(s.mm, obs_kappa);
    Json j;
    j["kappa"] = r.kappa;
    j["obsdiam"] = r.value;
    j["witness_member"] = r.witness;
    j["witness_origin"] = to_string(fam[r.witness].origin);
    j["family_size"] = r.family_size;
    j["partial_diameter"] = pd.value;
    j["partial_diameter_exact"] = pd.exact;
    emit(g, dump(j));
  };

  // isoperim
  auto* iso = app.add_subcommand("isoperim", "isoperimetric profile as CSV");
  std::string iso_path;
  double iso_scale = 0.0;
  iso->add_option("space", iso_path, "space file")->required();
  iso->add_option("--scale", iso_scale, "neighbourhood scale (default: 1.000001 x mesh step)");
  const std::function<void()> run_iso = [&] {
    const LoadedSpace s = load_space(iso_path);
    const double scale = iso_scale > 0.0 ? iso_scale : 1.000001 * s.mm.space.mesh_step();
    const Strategy st = s.mm.size() <= kExactLimit ? Strategy::Exact : Strategy::Family;
    std::optional<LipschitzFamily> fam;
    if (st == Strategy::Family) fam = family_for(s.mm, "", 0, g.seed);
    const auto prof = isoperimetric_profile(s.mm, scale, st, fam ? &*fam : nullptr);
    std::string csv = "mass,content,strategy,scale\n";
    for (const auto& p : prof)
      csv += format_double(p.mass) + "," + format_double(p.content) + "," + to_string(st) + "," +
             format_double(scale) + "\n";
    emit(g, csv);
  };

  // eigen
  auto* eig = app.add_subcommand("eigen", "first eigenvalue estimate");
  std::string eig_path;
  std::size_t eig_restarts = 32;
  eig->add_option("space", eig_path, "space file")->required();
  eig->add_option("--restarts", eig_restarts, "restarts")->check(CLI::PositiveNumber);
  const std::function<void()> run_eig = [&] {
    const LoadedSpace s = load_space(eig_path);
    const EigenEstimate e = first_eigenvalue(s.mm, eig_restarts, g.seed);
    Json j;
    j["lambda1"] = e.value;
    j["restarts"] = e.restarts;
    j["best_restart"] = e.best_restart;
    j["strategy"] = to_string(e.strategy);
    j["certificate"] = e.certificate;
    if (s.mm.space.is_symmetric(1e-12)) j["symmetric_oracle"] = symmetric_oracle(s.mm).value;
    emit(g, dump(j));
  };

  // verify
  auto* ver = app.add_subcommand("verify", "run the theorem suite");
  std::vector<std::string> ver_args;
  std::string ver_cheng, ver_format = "json";
  std::size_t ver_resolution = 0, ver_restarts = 8, ver_count = 0;
  double ver_scale = 0.0;
  ver->add_option("args", ver_args, "[sec3 sec4 sec5 sec6 ...] <space file | catalog id>")->required();
  ver->add_option("--cheng", ver_cheng, "Cheng inputs n,a,K,D");
  ver->add_option("--resolution", ver_resolution, "catalog resolution");
  ver->add_option("--restarts", ver_restarts, "eigen restarts")->check(CLI::PositiveNumber);
  ver->add_option("--count", ver_count, "family size (default 2n + 32)");
  ver->add_option("--scale", ver_scale, "isoperimetric scale");
  ver->add_option("--format", ver_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  const std::function<void()> run_ver = [&] {
    VerifyOptions opt;
    opt.seed = g.seed;
    opt.restarts = ver_restarts;
    opt.family_count = ver_count;
    opt.scale = ver_scale;
    std::set<std::string> sections;
    std::string target;
    for (const auto& a : ver_args) {
      std::stringstream in(a);
      std::string item;
      bool all_sections = true;
      std::vector<std::string> items;
      while (std::getline(in, item, ',')) {
        items.push_back(item);
        if (item != "sec3" && item != "sec4" && item != "sec5" && item != "sec6") all_sections = false;
      }
      if (all_sections && !items.empty()) {
        sections.insert(items.begin(), items.end());
      } else if (target.empty()) {
        target = a;
      } else {
        throw CLI::ValidationError("verify", "unexpected argument '" + a + "'");
      }
    }
    if (target.empty()) throw CLI::ValidationError("verify", "missing space file or catalog id");
    if (!sections.empty()) opt.sections = sections;
    LoadedSpace s = load_target(target, ver_resolution);
    opt.certified = s.certified;
    if (!ver_cheng.empty()) opt.cheng = parse_cheng(ver_cheng);
    const VerifyReport r = run_verify(s.mm, opt);
    emit(g, ver_format == "json" ? dump(r.to_json()) : r.to_csv());
    exit_code = r.any_fail() ? 1 : 0;
  };

  // export
  auto* exp = app.add_subcommand("export", "convert a verify report or profile to CSV");
  std::string exp_path;
  exp->add_option("input", exp_path, "report JSON or profile CSV")->required();
  const std::function<void()> run_exp = [&] {
    std::ifstream in(exp_path);
    if (!in) throw IoError("cannot read '" + exp_path + "'");
    const char first = static_cast<char>(in.peek());
    if (first == '{') {
      const Json j = read_json_file(exp_path);
      if (!j.contains("results")) throw IoError("'" + exp_path + "' is not a verify report");
      std::string csv = "id,status,margin,notes\n";
      for (const auto& [id, e] : j["results"].items()) {
        std::string notes = e.value("notes", std::string());
        for (char& c : notes)
          if (c == '"') c = '\'';
        csv += id + "," + e.value("status", std::string()) + "," +
               (e["margin"].is_number() ? format_double(e["margin"].get<double>()) : std::string("nan")) +
               ",\"" + notes + "\"\n";
      }
      emit(g, csv);
    } else {
      emit(g, profile_to_csv(profile_from_csv(in)));
    }
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    if (g.threads) set_thread_count(g.threads);
    if (gen->parsed()) run_gen();
    if (val->parsed()) run_val();
    if (fam->parsed()) run_fam();
    if (alp->parsed()) run_alp();
    if (obs->parsed()) run_obs();
    if (iso->parsed()) run_iso();
    if (eig->parsed()) run_eig();
    if (ver->parsed()) run_ver();
    if (exp->parsed()) run_exp();
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
