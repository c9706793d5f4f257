#include "ccmm/finsler.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ccmm {

std::string to_string(Domain d) {
  switch (d) {
    case Domain::Interval: return "interval";
    case Domain::Circle: return "circle";
    case Domain::Torus: return "torus";
    case Domain::Sphere: return "sphere";
  }
  return "interval";
}

Domain domain_from_string(const std::string& s) {
  if (s == "interval") return Domain::Interval;
  if (s == "circle") return Domain::Circle;
  if (s == "torus") return Domain::Torus;
  if (s == "sphere") return Domain::Sphere;
  throw Error("unknown domain '" + s + "'");
}

namespace {

std::string describe(const Point& x, std::size_t dim) {
  std::ostringstream os;
  os.precision(17);
  if (dim == 1) os << "x = " << x[0];
  else os << "(" << x[0] << ", " << x[1] << ")";
  return os.str();
}

}  // namespace

double RandersSpec::norm(const Point& x, const Point& v) const {
  const Tensor a = metric ? metric(x) : Tensor{1.0, 0.0, 1.0};
  const Point b = one_form ? one_form(x) : Point{0.0, 0.0};
  double quad, pairing, b_norm2;
  if (dimension() == 1) {
    if (!(a[0] > 0.0)) throw Error("metric is not positive definite at " + describe(x, 1));
    quad = a[0] * v[0] * v[0];
    pairing = b[0] * v[0];
    b_norm2 = b[0] * b[0] / a[0];
  } else {
    const double det = a[0] * a[2] - a[1] * a[1];
    if (!(a[0] > 0.0) || !(det > 0.0)) throw Error("metric is not positive definite at " + describe(x, 2));
    quad = a[0] * v[0] * v[0] + 2.0 * a[1] * v[0] * v[1] + a[2] * v[1] * v[1];
    pairing = b[0] * v[0] + b[1] * v[1];
    b_norm2 = (a[2] * b[0] * b[0] - 2.0 * a[1] * b[0] * b[1] + a[0] * b[1] * b[1]) / det;
  }
  if (!(b_norm2 < 1.0)) {
    throw Error("one-form has norm " + std::to_string(std::sqrt(b_norm2)) + " >= 1 at " +
                describe(x, dimension()));
  }
  return std::sqrt(quad) + pairing;
}

double finsler_length(const RandersSpec& spec, const std::vector<Point>& polyline, std::size_t k) {
  if (k < 1) throw Error("finsler_length needs k >= 1");
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < polyline.size(); ++s) {
    const Point& p = polyline[s];
    const Point& q = polyline[s + 1];
    const Point v{q[0] - p[0], q[1] - p[1]};
    double chord = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(k);
      chord += spec.norm({p[0] + t * v[0], p[1] + t * v[1]}, v);
    }
    total += chord / static_cast<double>(k);
  }
  return total;
}

namespace {

struct Grid {
  std::vector<Point> points;
  std::vector<double> volume;
  std::size_t nx = 0, ny = 1;
  double hx = 0.0, hy = 0.0;
  bool wrap_x = false, wrap_y = false;
};

Grid make_grid(const RandersSpec& s) {
  const std::size_t N = s.resolution;
  Grid g;
  switch (s.domain) {
    case Domain::Interval:
      if (!(s.x1 > s.x0)) throw Error("interval needs x1 > x0");
      g.nx = N;
      g.hx = (s.x1 - s.x0) / static_cast<double>(N);
      for (std::size_t i = 0; i < N; ++i) {
        g.points.push_back({s.x0 + (static_cast<double>(i) + 0.5) * g.hx, 0.0});
        g.volume.push_back(g.hx);
      }
      break;
    case Domain::Circle:
      if (!(s.length > 0.0)) throw Error("circle needs a positive length");
      g.nx = N;
      g.hx = s.length / static_cast<double>(N);
      g.wrap_x = true;
      for (std::size_t i = 0; i < N; ++i) {
        g.points.push_back({static_cast<double>(i) * g.hx, 0.0});
        g.volume.push_back(g.hx);
      }
      break;
    case Domain::Torus:
      if (!(s.length > 0.0)) throw Error("torus needs a positive side length");
      g.nx = g.ny = N;
      g.hx = g.hy = s.length / static_cast<double>(N);
      g.wrap_x = g.wrap_y = true;
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
          g.points.push_back({(static_cast<double>(i) + 0.5) * g.hx, (static_cast<double>(j) + 0.5) * g.hy});
          g.volume.push_back(g.hx * g.hy);
        }
      break;
    case Domain::Sphere:
      // Staggered rings: no sample sits on a pole.
      g.nx = N;
      g.ny = 2 * N;
      g.hx = g.hy = std::numbers::pi / static_cast<double>(N);
      g.wrap_y = true;
      for (std::size_t i = 0; i < g.nx; ++i)
        for (std::size_t j = 0; j < g.ny; ++j) {
          const double lat = -std::numbers::pi / 2 + (static_cast<double>(i) + 0.5) * g.hx;
          g.points.push_back({lat, static_cast<double>(j) * g.hy});
          g.volume.push_back(std::cos(lat) * g.hx * g.hy);
        }
      break;
  }
  return g;
}

double stencil_chordal_bound(int radius) {
  std::vector<double> angles;
  for (int di = -radius; di <= radius; ++di)
    for (int dj = -radius; dj <= radius; ++dj)
      if (di != 0 || dj != 0) angles.push_back(std::atan2(dj, di));
  std::sort(angles.begin(), angles.end());
  double gap = angles.front() + 2.0 * std::numbers::pi - angles.back();
  for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
  return 1.0 / std::cos(gap / 2.0) - 1.0;
}

}  // namespace

BuiltSpace build_space(const CatalogEntry& entry, const NeighborRule& rule) {
  const RandersSpec& spec = entry.spec;
  if (spec.resolution < 4) throw Error("resolution must be at least 4 per axis");
  const bool two_d = spec.dimension() == 2;
  const int radius = rule.radius > 0 ? rule.radius : (two_d ? 2 : 1);
  const Grid g = make_grid(spec);
  const std::size_t n = g.points.size();

  std::vector<std::pair<int, int>> offsets;
  for (int di = -radius; di <= radius; ++di)
    for (int dj = two_d ? -radius : 0; dj <= (two_d ? radius : 0); ++dj)
      if (di != 0 || dj != 0) offsets.emplace_back(di, dj);

  std::vector<std::vector<Edge>> per_point(n);
  parallel_chunks(n, 16, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const std::size_t i = p / g.ny, j = p % g.ny;
      for (const auto& [di, dj] : offsets) {
        long ii = static_cast<long>(i) + di, jj = static_cast<long>(j) + dj;
        const long nx = static_cast<long>(g.nx), ny = static_cast<long>(g.ny);
        if (g.wrap_x) ii = ((ii % nx) + nx) % nx;
        else if (ii < 0 || ii >= nx) continue;
        if (g.wrap_y) jj = ((jj % ny) + ny) % ny;
        else if (jj < 0 || jj >= ny) continue;
        const std::size_t q = static_cast<std::size_t>(ii) * g.ny + static_cast<std::size_t>(jj);
        if (q == p) continue;
        const Point& a = g.points[p];
        const Point b{a[0] + di * g.hx, a[1] + dj * g.hy};  // unwrapped chord end
        per_point[p].push_back({p, q, finsler_length(spec, {a, b}, rule.subdivisions)});
      }
    }
  });
  std::vector<Edge> edges;
  for (auto& v : per_point) edges.insert(edges.end(), v.begin(), v.end());

  QuasiMetricSpace space = [&] {
    try {
      return from_digraph(n, edges);
    } catch (const Error& e) {
      throw Error(std::string("neighbor graph of catalog entry '") + entry.id + "' is disconnected: " + e.what());
    }
  }();

  std::vector<double> w(n);
  for (std::size_t p = 0; p < n; ++p) w[p] = std::exp(-(entry.psi ? entry.psi(g.points[p]) : 0.0)) * g.volume[p];
  BuiltSpace built{MetricMeasureSpace(std::move(space), ProbabilityMeasure::normalized(std::move(w))), g.points,
                   two_d ? stencil_chordal_bound(radius) : 0.0};
  return built;
}

std::vector<CatalogEntry> catalog() {
  std::vector<CatalogEntry> out;
  const auto euclid = [](const Point&) { return Tensor{1.0, 0.0, 1.0}; };
  const auto zero_form = [](const Point&) { return Point{0.0, 0.0}; };

  {
    CatalogEntry e;
    e.id = "g1";
    e.description = "discrete Gaussian line on [-5, 5], psi = x^2 / 2";
    e.spec.domain = Domain::Interval;
    e.spec.x0 = -5.0;
    e.spec.x1 = 5.0;
    e.spec.resolution = 128;
    e.spec.metric = euclid;
    e.spec.one_form = zero_form;
    e.psi = [](const Point& x) { return 0.5 * x[0] * x[0]; };
    e.certified = Certificate{1.0, 0.0, 10.0, 1,
                              "Euclidean line: Ricci vanishes, so Ric_inf = Hess psi = 1; the measure "
                              "is the restriction of the standard normal, which has no distortion."};
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.id = "t2";
    e.description = "flat square torus of side 1, uniform density";
    e.spec.domain = Domain::Torus;
    e.spec.length = 1.0;
    e.spec.resolution = 16;
    e.spec.metric = euclid;
    e.spec.one_form = zero_form;
    e.psi = [](const Point&) { return 0.0; };
    e.certified = Certificate{0.0, 0.0, 1.0 / std::numbers::sqrt2, 2,
                              "flat metric: Ricci = 0; uniform Riemannian volume gives tau = 0; the "
                              "farthest points are half a side apart on both axes."};
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.id = "r1";
    e.description = "Randers circle of length 2 pi with constant one-form 0.3 d theta";
    e.spec.domain = Domain::Circle;
    e.spec.length = 2.0 * std::numbers::pi;
    e.spec.resolution = 64;
    e.spec.metric = euclid;
    e.spec.one_form = [](const Point&) { return Point{0.3, 0.0}; };
    e.psi = [](const Point&) { return 0.0; };
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.id = "s2";
    e.description = "round unit sphere on a staggered latitude-longitude grid";
    e.spec.domain = Domain::Sphere;
    e.spec.resolution = 12;
    e.spec.metric = [](const Point& x) {
      const double c = std::cos(x[0]);
      return Tensor{1.0, 0.0, c * c};
    };
    e.spec.one_form = zero_form;
    e.psi = [](const Point&) { return 0.0; };
    e.certified = Certificate{1.0, 0.0, std::numbers::pi, 2,
                              "round metric: Ricci = 1; uniform Riemannian volume gives tau = 0; "
                              "antipodal points are pi apart."};
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.id = "c1";
    e.description = "unit circle, uniform density";
    e.spec.domain = Domain::Circle;
    e.spec.length = 2.0 * std::numbers::pi;
    e.spec.resolution = 64;
    e.spec.metric = euclid;
    e.spec.one_form = zero_form;
    e.psi = [](const Point&) { return 0.0; };
    out.push_back(e);
  }
  return out;
}

CatalogEntry catalog_entry(const std::string& id, std::size_t resolution) {
  for (auto& e : catalog()) {
    if (e.id == id) {
      if (resolution) e.spec.resolution = resolution;
      return e;
    }
  }
  throw Error("unknown catalog id '" + id + "' (known: g1, t2, r1, s2, c1)");
}

}  // namespace ccmm
