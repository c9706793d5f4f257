#include "ccmm/io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ccmm {

namespace {

std::vector<double> number_array(const Json& j, const std::string& what) {
  if (!j.is_array()) throw IoError(what + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw IoError(what + " must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

LoadedSpace parse_space(const Json& j) {
  if (!j.is_object()) throw IoError("space file must hold a JSON object");
  const bool has_dist = j.contains("dist") && !j["dist"].is_null();
  const bool has_edges = j.contains("edges") && !j["edges"].is_null();
  if (has_dist == has_edges) throw IoError("space file needs exactly one of \"dist\" and \"edges\"");

  std::vector<std::string> labels;
  if (j.contains("labels") && !j["labels"].is_null()) {
    for (const auto& l : j["labels"]) labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
  }

  std::optional<QuasiMetricSpace> space;
  if (has_dist) {
    DistanceMatrix m;
    for (const auto& row : j["dist"]) m.push_back(number_array(row, "dist row"));
    if (j.contains("n") && j["n"].get<std::size_t>() != m.size()) {
      throw IoError("\"n\" does not match the number of dist rows");
    }
    space = QuasiMetricSpace::from_matrix(m, labels);
  } else {
    if (!j.contains("n")) throw IoError("edge-list spaces need \"n\"");
    const std::size_t n = j["n"].get<std::size_t>();
    std::vector<Edge> edges;
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 3) throw IoError("each edge must be [i, j, w]");
      const std::size_t from = e[0].get<std::size_t>(), to = e[1].get<std::size_t>();
      const double w = e[2].get<double>();
      if (from >= n || to >= n) throw IoError("edge endpoint out of range");
      if (!(w > 0.0) || !std::isfinite(w)) throw IoError("edge weights must be positive and finite");
      edges.push_back({from, to, w});
    }
    space = from_digraph(n, edges);
  }
  const std::size_t n = space->size();
  ProbabilityMeasure measure = ProbabilityMeasure::uniform(n);
  if (j.contains("measure") && !j["measure"].is_null()) {
    measure = ProbabilityMeasure(number_array(j["measure"], "measure"));
  }
  LoadedSpace out{MetricMeasureSpace(std::move(*space), std::move(measure)), std::nullopt};
  if (j.contains("certified") && !j["certified"].is_null()) {
    const auto& c = j["certified"];
    Certificate cert;
    cert.K = c.value("K", 0.0);
    cert.a = c.value("a", 0.0);
    cert.D = c.value("D", 0.0);
    cert.dim = c.value("dim", 1);
    cert.provenance = c.value("provenance", std::string());
    out.certified = cert;
  }
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("cannot parse '" + path + "': " + e.what());
  }
}

LoadedSpace load_space(const std::string& path) {
  const Json j = read_json_file(path);
  try {
    return parse_space(j);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed space file '" + path + "': " + e.what());
  }
}

Json space_to_json(const MetricMeasureSpace& mm, const std::optional<Certificate>& certified) {
  Json j;
  j["n"] = mm.size();
  j["dist"] = mm.space.matrix();
  j["edges"] = nullptr;
  j["measure"] = mm.measure.weights();
  j["labels"] = mm.space.labels();
  if (certified) {
    j["certified"] = {{"K", certified->K},
                      {"a", certified->a},
                      {"D", certified->D},
                      {"dim", certified->dim},
                      {"provenance", certified->provenance}};
  }
  return j;
}

std::string space_hash(const MetricMeasureSpace& mm) {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  const std::uint64_t n = mm.size();
  feed(&n, sizeof n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = mm.space.row(i);
    feed(row.data(), row.size() * sizeof(double));
  }
  feed(mm.measure.weights().data(), n * sizeof(double));
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

CatalogEntry parse_catalog_spec(const Json& j) {
  if (!j.is_object()) throw IoError("spec file must hold a JSON object");
  CatalogEntry e;
  e.id = j.value("id", std::string("custom"));
  e.description = j.value("description", std::string());
  RandersSpec& s = e.spec;
  s.domain = domain_from_string(j.value("domain", std::string("interval")));
  s.x0 = j.value("x0", 0.0);
  s.x1 = j.value("x1", 1.0);
  s.length = j.value("length", 1.0);
  s.resolution = j.value("resolution", std::size_t{32});
  Tensor a{1.0, 0.0, 1.0};
  if (j.contains("metric")) {
    const auto v = number_array(j["metric"], "metric");
    if (v.size() != 3) throw IoError("metric must be [a11, a12, a22]");
    a = {v[0], v[1], v[2]};
  }
  Point b{0.0, 0.0};
  if (j.contains("one_form")) {
    const auto v = number_array(j["one_form"], "one_form");
    if (v.empty() || v.size() > 2) throw IoError("one_form must have one or two components");
    b = {v[0], v.size() > 1 ? v[1] : 0.0};
  }
  s.metric = [a](const Point&) { return a; };
  s.one_form = [b](const Point&) { return b; };
  const double k = j.value("psi_quadratic", 0.0);
  e.psi = [k](const Point& x) { return 0.5 * k * (x[0] * x[0] + x[1] * x[1]); };
  if (j.contains("certified") && !j["certified"].is_null()) {
    const auto& c = j["certified"];
    Certificate cert;
    cert.K = c.value("K", 0.0);
    cert.a = c.value("a", 0.0);
    cert.D = c.value("D", 0.0);
    cert.dim = c.value("dim", 1);
    cert.provenance = c.value("provenance", std::string());
    e.certified = cert;
  }
  return e;
}

Json family_to_json(const LipschitzFamily& family) {
  Json members = Json::array();
  for (const auto& m : family.members()) {
    members.push_back({{"origin", to_string(m.origin)}, {"anchor", m.anchor}, {"values", m.values}});
  }
  Json j;
  j["size"] = family.size();
  j["members"] = std::move(members);
  return j;
}

LipschitzFamily family_from_json(const Json& j, const QuasiMetricSpace& space) {
  if (!j.is_object() || !j.contains("members")) throw IoError("family file needs \"members\"");
  std::vector<LipschitzFamily::Member> members;
  for (const auto& m : j["members"]) {
    LipschitzFamily::Member member;
    member.values = number_array(m.at("values"), "family values");
    member.origin = field_origin_from_string(m.value("origin", std::string("user")));
    member.anchor = m.value("anchor", std::size_t{0});
    members.push_back(std::move(member));
  }
  return LipschitzFamily(space, std::move(members));
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string profile_to_csv(const ConcentrationProfile& profile) {
  std::string out = "r,alpha,strategy\n";
  const std::string tag = to_string(profile.strategy);
  for (const auto& p : profile.points) out += format_double(p.r) + "," + format_double(p.alpha) + "," + tag + "\n";
  return out;
}

ConcentrationProfile profile_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "r,alpha,strategy") throw IoError("profile CSV needs header r,alpha,strategy");
  ConcentrationProfile profile;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string r, a, s;
    if (!std::getline(row, r, ',') || !std::getline(row, a, ',') || !std::getline(row, s)) {
      throw IoError("malformed profile row '" + line + "'");
    }
    profile.points.push_back({std::strtod(r.c_str(), nullptr), std::strtod(a.c_str(), nullptr)});
    profile.strategy = strategy_from_string(s);
  }
  return profile;
}

}  // namespace ccmm
