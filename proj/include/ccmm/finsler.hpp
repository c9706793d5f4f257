#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ccmm/quasimetric.hpp"

namespace ccmm {

/// Coordinates: x for 1D domains, (x, y) on the torus, (latitude, longitude)
/// on the sphere.
using Point = std::array<double, 2>;
/// Symmetric 2x2 tensor stored as {a11, a12, a22}; 1D domains use a11.
using Tensor = std::array<double, 3>;

enum class Domain { Interval, Circle, Torus, Sphere };
std::string to_string(Domain d);
Domain domain_from_string(const std::string& s);

/// F(x, y) = sqrt(a_x(y, y)) + b_x(y) on a sampled domain.
struct RandersSpec {
  Domain domain = Domain::Interval;
  double x0 = 0.0, x1 = 1.0;  ///< interval end points
  double length = 1.0;        ///< circle circumference or torus side
  std::size_t resolution = 32;  ///< points per axis (sphere: latitude rings)
  std::function<Tensor(const Point&)> metric;
  std::function<Point(const Point&)> one_form;

  std::size_t dimension() const { return domain == Domain::Interval || domain == Domain::Circle ? 1 : 2; }
  /// F(x, v); throws when ||b||_a >= 1 at x.
  double norm(const Point& x, const Point& v) const;
};

struct Certificate {
  double K = 0.0;  ///< weighted Ricci lower bound
  double a = 0.0;  ///< distortion bound
  double D = 0.0;  ///< diameter
  int dim = 1;
  std::string provenance;
};

struct CatalogEntry {
  std::string id;
  std::string description;
  RandersSpec spec;
  std::function<double(const Point&)> psi;  ///< dm = exp(-psi) dVol
  std::optional<Certificate> certified;
};

/// Composite-midpoint quadrature of F along each chord of a polyline.
double finsler_length(const RandersSpec& spec, const std::vector<Point>& polyline, std::size_t k = 16);

struct NeighborRule {
  int radius = 0;           ///< stencil half-width in grid steps; 0 picks 1 in 1D, 2 in 2D
  std::size_t subdivisions = 16;
};

struct BuiltSpace {
  MetricMeasureSpace mm;
  std::vector<Point> points;
  /// Relative excess of grid path length over the straight chord for the
  /// worst direction between stencil directions (0 in 1D).
  double chordal_bound = 0.0;
};

BuiltSpace build_space(const CatalogEntry& entry, const NeighborRule& rule = {});

/// g1, t2, r1, s2, c1.
std::vector<CatalogEntry> catalog();
/// Throws Error for an unknown id.
CatalogEntry catalog_entry(const std::string& id, std::size_t resolution = 0);

}  // namespace ccmm
