#include "slapknn/constructions.hpp"

#include "slapknn/classifier.hpp"
#include "slapknn/fitter.hpp"
#include "slapknn/format.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace slapknn {

namespace {

constexpr double kPi = std::numbers::pi;

struct Fraction
{
  long long num;
  long long den;
};

SoftLabel probabilistic_from_fractions(std::size_t num_classes,
                                       const std::vector<std::pair<std::size_t, Fraction>>& entries)
{
  // Numerators over a common denominator must add up exactly before conversion.
  long long den = entries.front().second.den;
  long long total = 0;
  for (const auto& [cls, f] : entries) {
    if (f.den != den) throw Error("internal: label fractions need a common denominator");
    total += f.num;
  }
  if (total != den) throw Error("internal: label fractions do not sum to one");

  std::vector<double> values(num_classes, 0.0);
  for (const auto& [cls, f] : entries)
    values[cls] += static_cast<double>(f.num) / static_cast<double>(f.den);
  return SoftLabel::probabilistic(std::move(values));
}

std::string describe(const std::string& kind, const Params& params)
{
  std::string out = kind + "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += params[i].first + "=" + format_number(params[i].second);
  }
  return out + ")";
}

Construction finish(Construction c)
{
  c.set.name = describe(c.kind, c.params);
  auto problems = construction_violations(c);
  if (!problems.empty()) {
    std::string msg = "internal: construction " + c.set.name + " is invalid:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw Error(msg);
  }
  return c;
}

Point on_circle(double radius, double angle)
{
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

void require_positive(double v, const char* what)
{
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(std::string(what) + " must be positive");
}

} // namespace

std::vector<std::string> construction_violations(const Construction& c)
{
  std::vector<std::string> out;
  for (const auto& issue : validate(c.set)) {
    std::string msg = issue.message;
    if (issue.index != ValidationIssue::npos) msg = "prototype " + std::to_string(issue.index) + ": " + msg;
    out.push_back(std::move(msg));
  }
  if (c.claimed_classes != c.set.num_classes) out.emplace_back("claimed_classes != num_classes");
  if (c.required_k < 1 || c.required_k > c.set.size()) out.emplace_back("required_k out of range");
  for (const auto& b : c.boundaries) {
    if (b.from >= c.set.size() || b.to >= c.set.size() || b.from == b.to)
      out.emplace_back("boundary spec refers to bad prototype indices");
    double prev = 0.0;
    for (double f : b.fractions) {
      if (!(f > prev) || !(f < 1.0)) {
        out.emplace_back("boundary fractions must be strictly increasing in (0,1)");
        break;
      }
      prev = f;
    }
  }
  if (c.radial) {
    double prev = 0.0;
    for (double r : c.radial->radii) {
      if (!(r > prev)) {
        out.emplace_back("radial targets must be strictly increasing and positive");
        break;
      }
      prev = r;
    }
  }
  for (const auto& circle : c.circles)
    if (circle.cls >= c.set.num_classes) out.emplace_back("circle class out of range");
  if (c.view && !c.view->well_ordered()) out.emplace_back("view bounds not well ordered");
  return out;
}

Bounds default_bounds(const PrototypeSet& set)
{
  if (set.dim != 2) throw Error("raster bounds need two-dimensional prototypes");
  if (set.prototypes.empty()) throw Error("prototype set is empty");
  double xmin = set.prototypes.front().position[0], xmax = xmin;
  double ymin = set.prototypes.front().position[1], ymax = ymin;
  for (const auto& p : set.prototypes) {
    xmin = std::min(xmin, p.position[0]);
    xmax = std::max(xmax, p.position[0]);
    ymin = std::min(ymin, p.position[1]);
    ymax = std::max(ymax, p.position[1]);
  }
  const double extent = std::max(xmax - xmin, ymax - ymin);
  const double pad = extent > 0.0 ? 0.25 * extent : 1.0;
  return {xmin - pad, xmax + pad, ymin - pad, ymax + pad};
}

Bounds default_bounds(const Construction& c)
{
  return c.view ? *c.view : default_bounds(c.set);
}

Construction three_from_two(double spacing)
{
  require_positive(spacing, "spacing");
  Construction c;
  c.kind = "three_from_two";
  c.params = {{"spacing", spacing}};
  c.set.dim = 2;
  c.set.num_classes = 3;
  c.set.prototypes.push_back(
    {{0.0, 0.0}, probabilistic_from_fractions(3, {{0, {3, 5}}, {1, {2, 5}}})});
  c.set.prototypes.push_back(
    {{spacing, 0.0}, probabilistic_from_fractions(3, {{1, {2, 5}}, {2, {3, 5}}})});
  c.required_k = 2;
  c.claimed_classes = 3;
  c.boundaries.push_back({0, 1, {1.0 / 3.0, 2.0 / 3.0}});
  return finish(std::move(c));
}

std::vector<std::pair<long long, long long>> n_from_two_label_fractions(std::size_t n)
{
  if (n == 0) throw Error("n_from_two needs n >= 1");
  if (n == 1) return {{1, 1}};
  const auto nn = static_cast<long long>(n);
  long long squares = 0;
  for (long long j = 1; j < nn; ++j) squares += j * j;
  std::vector<std::pair<long long, long long>> out;
  for (long long i = 1; i <= nn; ++i) out.emplace_back((nn * (nn - 1) - i * (i - 1)) / 2, squares);
  return out;
}

Construction n_from_two(std::size_t n, std::optional<double> spacing)
{
  if (n == 0) throw Error("n_from_two needs n >= 1");
  const double gap = spacing.value_or(static_cast<double>(n));
  require_positive(gap, "spacing");

  const auto fractions = n_from_two_label_fractions(n);
  std::vector<std::pair<std::size_t, Fraction>> first, second;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [num, den] = fractions[i];
    if (num == 0) continue;
    first.push_back({i, {num, den}});
    second.push_back({n - 1 - i, {num, den}});
  }

  Construction c;
  c.kind = "n_from_two";
  c.params = {{"n", static_cast<double>(n)}, {"spacing", gap}};
  c.set.dim = 2;
  c.set.num_classes = n;
  c.set.prototypes.push_back({{0.0, 0.0}, probabilistic_from_fractions(n, first)});
  c.set.prototypes.push_back({{gap, 0.0}, probabilistic_from_fractions(n, second)});
  c.required_k = 2;
  c.claimed_classes = n;
  if (n > 1) {
    BoundarySpec spec{0, 1, {}};
    for (std::size_t i = 1; i < n; ++i)
      spec.fractions.push_back(static_cast<double>(i) / static_cast<double>(n));
    c.boundaries.push_back(std::move(spec));
  }
  return finish(std::move(c));
}

Construction star_pairs(std::size_t m, double radius)
{
  if (m < 2) throw Error("star_pairs needs M >= 2");
  require_positive(radius, "radius");
  const std::size_t outer = m - 1;
  const std::size_t classes = 2 * m - 1;
  const auto center_den = static_cast<long long>(2 * m + 1);

  Construction c;
  c.kind = "star_pairs";
  c.params = {{"m", static_cast<double>(m)}, {"radius", radius}};
  c.set.dim = 2;
  c.set.num_classes = classes;

  std::vector<std::pair<std::size_t, Fraction>> center{{0, {3, center_den}}};
  for (std::size_t i = 0; i < outer; ++i) center.push_back({m + i, {2, center_den}});
  c.set.prototypes.push_back({{0.0, 0.0}, probabilistic_from_fractions(classes, center)});

  const double fm = static_cast<double>(m);
  const double inner = 5.0 / (4.0 * fm + 7.0);
  const double outer_frac = 10.0 / (2.0 * fm + 11.0);
  for (std::size_t i = 0; i < outer; ++i) {
    const double angle = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(outer);
    c.set.prototypes.push_back(
      {on_circle(radius, angle),
       probabilistic_from_fractions(classes, {{1 + i, {3, 5}}, {m + i, {2, 5}}})});
    c.boundaries.push_back({0, 1 + i, {inner, outer_frac}});
  }
  c.required_k = 2;
  c.claimed_classes = classes;
  return finish(std::move(c));
}

Construction polygon_pairs(std::size_t m, double circumradius)
{
  if (m < 3) throw Error("polygon_pairs needs M >= 3");
  require_positive(circumradius, "circumradius");
  const std::size_t classes = 2 * m;

  Construction c;
  c.kind = "polygon_pairs";
  c.params = {{"m", static_cast<double>(m)}, {"radius", circumradius}};
  c.set.dim = 2;
  c.set.num_classes = classes;
  for (std::size_t i = 0; i < m; ++i) {
    const double angle = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(m);
    const std::size_t next_pair = m + i;
    const std::size_t prev_pair = m + (i + m - 1) % m;
    c.set.prototypes.push_back(
      {on_circle(circumradius, angle),
       probabilistic_from_fractions(classes, {{i, {3, 7}}, {next_pair, {2, 7}}, {prev_pair, {2, 7}}})});
    c.boundaries.push_back({i, (i + 1) % m, {1.0 / 3.0, 2.0 / 3.0}});
  }
  c.required_k = 2;
  c.claimed_classes = classes;
  return finish(std::move(c));
}

Construction polygon_with_center(std::size_t m, double circumradius)
{
  if (m < 4) throw Error("polygon_with_center needs M >= 4");
  require_positive(circumradius, "circumradius");
  const std::size_t v = m - 1;
  const std::size_t classes = 3 * m - 2;
  const auto center_den = static_cast<long long>(2 * m + 1);

  Construction c;
  c.kind = "polygon_with_center";
  c.params = {{"m", static_cast<double>(m)}, {"radius", circumradius}};
  c.set.dim = 2;
  c.set.num_classes = classes;

  std::vector<std::pair<std::size_t, Fraction>> center{{0, {3, center_den}}};
  for (std::size_t i = 0; i < v; ++i) center.push_back({1 + v + i, {2, center_den}});
  c.set.prototypes.push_back({{0.0, 0.0}, probabilistic_from_fractions(classes, center)});

  for (std::size_t i = 0; i < v; ++i) {
    const double angle = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(v);
    const std::size_t own = 1 + i;
    const std::size_t with_center = 1 + v + i;
    const std::size_t next_pair = 1 + 2 * v + i;
    const std::size_t prev_pair = 1 + 2 * v + (i + v - 1) % v;
    c.set.prototypes.push_back(
      {on_circle(circumradius, angle),
       probabilistic_from_fractions(classes, {{own, {4, 13}},
                                              {with_center, {3, 13}},
                                              {next_pair, {3, 13}},
                                              {prev_pair, {3, 13}}})});
  }
  c.required_k = m;
  c.claimed_classes = classes;
  // The adjacent-pair regions sit outside the polygon edges; an odd polygon's
  // padded bounding box is lopsided and clips the one facing the short side.
  const double half = 1.5 * circumradius;
  c.view = Bounds{-half, half, -half, half};
  return finish(std::move(c));
}

Construction concentric_ellipses(std::size_t num_classes, std::uint64_t seed)
{
  if (num_classes < 2) throw Error("concentric_ellipses needs at least 2 classes");
  const std::vector<Point> positions{{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}};
  RadialSpec radial{{0.0, 0.0}, {0.0, 1.0}, {}};
  const double outermost = 0.45;
  for (std::size_t j = 1; j < num_classes; ++j)
    radial.radii.push_back(outermost * static_cast<double>(j) / static_cast<double>(num_classes - 1));

  RadialFitOptions opts;
  opts.origin = radial.origin;
  opts.direction = radial.direction;
  opts.seed = seed;
  const auto fit = fit_radial_labels(positions, 3, radial.radii, num_classes, opts);

  Construction c;
  c.kind = "concentric_ellipses";
  c.params = {{"n", static_cast<double>(num_classes)}, {"seed", static_cast<double>(seed)}};
  c.set.dim = 2;
  c.set.num_classes = num_classes;
  for (std::size_t i = 0; i < positions.size(); ++i)
    c.set.prototypes.push_back({positions[i], fit.labels[i]});
  c.required_k = 3;
  c.claimed_classes = num_classes;
  c.radial = std::move(radial);
  c.fit_residual = fit.residual;
  return finish(std::move(c));
}

std::size_t circle_hard_count(std::size_t t)
{
  if (t == 0) throw Error("circle index starts at 1");
  const double ft = static_cast<double>(t);
  const double exact = kPi / std::acos(1.0 - 1.0 / (2.0 * ft * ft));
  // t=1 is exactly 3 in real arithmetic; keep rounding noise from pushing it to 4.
  return static_cast<std::size_t>(std::ceil(exact - 1e-9));
}

std::size_t circle_misclassifications(const PrototypeSet& set, std::size_t k,
                                      const CircleSpec& circle, std::size_t samples)
{
  Scorer scorer(set, k);
  std::vector<double> scores(set.num_classes);
  std::size_t wrong = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double angle = 2.0 * kPi * static_cast<double>(s) / static_cast<double>(samples);
    const Point x = on_circle(circle.radius, angle);
    if (scorer.classify(x).predicted != circle.cls) ++wrong;
  }
  return wrong;
}

Construction circle_hard_baseline(std::size_t n, double c)
{
  if (n == 0) throw Error("circle_hard_baseline needs N >= 1");
  require_positive(c, "c");

  std::vector<std::size_t> counts(n);
  for (std::size_t t = 1; t <= n; ++t) counts[t - 1] = circle_hard_count(t);

  std::vector<CircleSpec> circles;
  for (std::size_t t = 1; t <= n; ++t) circles.push_back({static_cast<double>(t) * c, t - 1});

  auto build = [&] {
    PrototypeSet set;
    set.dim = 2;
    set.num_classes = n;
    for (std::size_t t = 1; t <= n; ++t) {
      const std::size_t count = counts[t - 1];
      for (std::size_t j = 0; j < count; ++j) {
        const double angle = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(count);
        set.prototypes.push_back({on_circle(static_cast<double>(t) * c, angle), SoftLabel::hard(n, t - 1)});
      }
    }
    return set;
  };

  constexpr std::size_t kSamples = 10000;
  PrototypeSet set = build();
  for (std::size_t round = 0; round < 64; ++round) {
    bool bumped = false;
    for (std::size_t t = 0; t < n; ++t) {
      if (circle_misclassifications(set, 1, circles[t], kSamples) > 0) {
        ++counts[t];
        bumped = true;
      }
    }
    if (!bumped) break;
    set = build();
  }

  Construction out;
  out.kind = "circle_hard_baseline";
  out.params = {{"n", static_cast<double>(n)}, {"c", c}};
  out.set = std::move(set);
  out.required_k = 1;
  out.claimed_classes = n;
  out.circles = std::move(circles);
  const double half = (static_cast<double>(n) + 1.0) * c;
  out.view = Bounds{-half, half, -half, half};
  return finish(std::move(out));
}

Construction circle_soft(std::size_t n, double c, std::uint64_t seed)
{
  if (n == 0) throw Error("circle_soft needs N >= 1");
  require_positive(c, "c");
  const double far = 3.5 * static_cast<double>(std::max<std::size_t>(n, 2)) * c;
  const std::vector<Point> positions{{0.0, 0.0}, {far, 0.0}, {0.0, far}, {-far, 0.0}, {0.0, -far}};

  RadialSpec radial{{0.0, 0.0}, {std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0}, {}};
  for (std::size_t t = 1; t < n; ++t) radial.radii.push_back((static_cast<double>(t) + 0.5) * c);

  Construction out;
  out.kind = "circle_soft";
  out.params = {{"n", static_cast<double>(n)}, {"c", c}, {"seed", static_cast<double>(seed)}};
  out.set.dim = 2;
  out.set.num_classes = n;
  if (n == 1) {
    for (const auto& p : positions) out.set.prototypes.push_back({p, SoftLabel::unrestricted({1.0})});
    out.fit_residual = 0.0;
  } else {
    RadialFitOptions opts;
    opts.origin = radial.origin;
    opts.direction = radial.direction;
    opts.seed = seed;
    const auto fit = fit_radial_labels(positions, positions.size(), radial.radii, n, opts);
    for (std::size_t i = 0; i < positions.size(); ++i)
      out.set.prototypes.push_back({positions[i], fit.labels[i]});
    out.fit_residual = fit.residual;
    out.radial = std::move(radial);
  }
  out.required_k = positions.size();
  out.claimed_classes = n;
  for (std::size_t t = 1; t <= n; ++t) out.circles.push_back({static_cast<double>(t) * c, t - 1});
  const double half = (static_cast<double>(n) + 1.0) * c;
  out.view = Bounds{-half, half, -half, half};
  return finish(std::move(out));
}

const std::vector<std::string>& construction_names()
{
  static const std::vector<std::string> names{
    "three_from_two", "n_from_two",         "star_pairs",           "polygon_pairs",
    "polygon_with_center", "concentric_ellipses", "circle_hard_baseline", "circle_soft"};
  return names;
}

Construction make_construction(const std::string& name, const ConstructionArgs& args)
{
  if (name == "three_from_two") return three_from_two(args.spacing.value_or(3.0));
  if (name == "n_from_two") return n_from_two(args.n.value_or(3), args.spacing);
  if (name == "star_pairs") return star_pairs(args.m.value_or(4), args.radius.value_or(1.0));
  if (name == "polygon_pairs") return polygon_pairs(args.m.value_or(4), args.radius.value_or(1.0));
  if (name == "polygon_with_center")
    return polygon_with_center(args.m.value_or(4), args.radius.value_or(1.0));
  if (name == "concentric_ellipses") return concentric_ellipses(args.n.value_or(3), args.seed);
  if (name == "circle_hard_baseline") return circle_hard_baseline(args.n.value_or(6), args.c.value_or(1.0));
  if (name == "circle_soft") return circle_soft(args.n.value_or(6), args.c.value_or(1.0), args.seed);
  throw Error("unknown construction '" + name + "'");
}

} // namespace slapknn
