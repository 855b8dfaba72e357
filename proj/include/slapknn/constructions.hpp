#pragma once

#include "slapknn/core.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace slapknn {

struct Bounds
{
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 1.0;

  bool well_ordered() const { return xmin < xmax && ymin < ymax; }
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Expected class changes along the segment from prototype `from` to prototype `to`,
/// as fractions of the segment length measured from `from`.
struct BoundarySpec
{
  std::size_t from = 0;
  std::size_t to = 0;
  std::vector<double> fractions;
};

/// Concentric circle of data points that must all classify as `cls`.
struct CircleSpec
{
  double radius = 0.0;
  std::size_t cls = 0;
};

/// Class changes expected at `radii` along the ray origin + r * direction,
/// going from class j to class j+1 at radii[j].
struct RadialSpec
{
  Point origin{0.0, 0.0};
  Point direction{1.0, 0.0};
  std::vector<double> radii;
};

using Params = std::vector<std::pair<std::string, double>>;

struct Construction
{
  PrototypeSet set;
  std::size_t required_k = 1;
  std::size_t claimed_classes = 0;
  std::vector<BoundarySpec> boundaries;
  std::vector<CircleSpec> circles;
  std::optional<RadialSpec> radial;
  /// Preferred raster region; when absent the padded prototype bounding box is used.
  std::optional<Bounds> view;
  std::string kind;
  Params params;
  /// Fitter RMS residual for fitted constructions.
  std::optional<double> fit_residual;
};

/// Empty when the construction satisfies its invariants.
std::vector<std::string> construction_violations(const Construction& c);

/// Prototype bounding box padded by 25% of the larger extent on every side.
Bounds default_bounds(const PrototypeSet& set);
Bounds default_bounds(const Construction& c);

// Two prototypes `spacing` apart with labels (3/5, 2/5, 0) and its reversal; k=2, 3 classes.
Construction three_from_two(double spacing = 3.0);

// Two prototypes separating n classes with k=2. Default spacing is n.
Construction n_from_two(std::size_t n, std::optional<double> spacing = std::nullopt);

/// n_from_two label of the first prototype as exact fractions (numerator, denominator).
std::vector<std::pair<long long, long long>> n_from_two_label_fractions(std::size_t n);

// Center prototype plus M-1 equally spaced prototypes at `radius`; k=2, 2M-1 classes.
// Classes: 0 center, 1..M-1 outer, M..2M-2 the class between the center and outer i.
Construction star_pairs(std::size_t m, double radius = 1.0);

// Regular M-gon; k=2, 2M classes. Classes: 0..M-1 vertex, M+i between vertices i and i+1.
Construction polygon_pairs(std::size_t m, double circumradius = 1.0);

// Center plus the vertices of a regular (M-1)-gon; k=M, 3M-2 classes.
// Classes: 0 center, 1..V vertex i-1, V+1..2V center/vertex pair, 2V+1..3V vertex pair (i, i+1)
// with V = M-1.
Construction polygon_with_center(std::size_t m, double circumradius = 1.0);

/// Three collinear prototypes with fitted unrestricted labels; k=3, nested elliptical
/// bands. Boundaries targeted along the perpendicular bisector.
Construction concentric_ellipses(std::size_t num_classes, std::uint64_t seed = 0);

/// Hard-label 1NN baseline: ceil(pi / acos(1 - 1/(2t^2))) prototypes on circle t
/// (radius t*c, class t-1), bumped per circle until dense sampling separates all circles.
Construction circle_hard_baseline(std::size_t n, double c = 1.0);

/// Prototype count for circle t from the closed-form bound, before any bump.
std::size_t circle_hard_count(std::size_t t);

/// Five soft-label prototypes (center plus four on the axes) fitted so that k=5 separates
/// n concentric circles of radii t*c.
Construction circle_soft(std::size_t n = 6, double c = 1.0, std::uint64_t seed = 0);

/// Samples `samples` equally spaced angles on the circle and counts points whose
/// predicted class is not circle.cls.
std::size_t circle_misclassifications(const PrototypeSet& set, std::size_t k,
                                      const CircleSpec& circle, std::size_t samples);

struct ConstructionArgs
{
  std::optional<std::size_t> n;
  std::optional<std::size_t> m;
  std::optional<double> spacing;
  std::optional<double> radius;
  std::optional<double> c;
  std::uint64_t seed = 0;
};

/// Dispatch by name: three_from_two, n_from_two, star_pairs, polygon_pairs,
/// polygon_with_center, concentric_ellipses, circle_hard_baseline, circle_soft.
Construction make_construction(const std::string& name, const ConstructionArgs& args);
const std::vector<std::string>& construction_names();

} // namespace slapknn
