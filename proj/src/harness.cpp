#include "slapknn/harness.hpp"

#include "slapknn/classifier.hpp"
#include "slapknn/format.hpp"
#include "slapknn/landscape.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace slapknn {

bool Report::pass() const
{
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string report_json(const Report& report, int indent)
{
  using ordered_json = nlohmann::ordered_json;
  ordered_json j;
  j["construction"] = report.construction;
  auto params = ordered_json::object();
  for (const auto& [key, value] : report.params) params[key] = value;
  j["params"] = std::move(params);
  auto checks = ordered_json::array();
  for (const auto& c : report.checks) {
    ordered_json entry;
    entry["name"] = c.name;
    entry["pass"] = c.pass;
    entry["observed"] = c.observed;
    entry["expected"] = c.expected;
    entry["tol"] = c.tol;
    checks.push_back(std::move(entry));
  }
  j["checks"] = std::move(checks);
  j["pass"] = report.pass();
  return j.dump(indent) + "\n";
}

std::vector<Check> verify_class_count(const Construction& c, std::span<const std::size_t> resolutions,
                                      std::size_t partitions)
{
  static const std::vector<std::size_t> kDefault{512, 1024};
  if (resolutions.empty()) resolutions = kDefault;
  const Bounds bounds = default_bounds(c);
  std::vector<Check> out;
  for (std::size_t res : resolutions) {
    const auto grid = rasterize(c.set, c.required_k, bounds, res, res, partitions);
    const auto report = region_report(grid);
    const auto observed = static_cast<double>(report.distinct_classes);
    const auto expected = static_cast<double>(c.claimed_classes);
    out.push_back({"class_count@" + std::to_string(res), observed == expected, observed, expected, 0.0});
  }
  return out;
}

std::vector<Check> verify_boundaries(const Construction& c, double tol)
{
  std::vector<Check> out;
  for (const auto& spec : c.boundaries) {
    const auto& a = c.set.prototypes[spec.from].position;
    const auto& b = c.set.prototypes[spec.to].position;
    const auto crossings = find_crossings(c.set, c.required_k, a, b);
    const std::string base = "boundary " + std::to_string(spec.from) + "->" + std::to_string(spec.to);
    if (crossings.size() != spec.fractions.size()) {
      out.push_back({base + " crossing count", false, static_cast<double>(crossings.size()),
                     static_cast<double>(spec.fractions.size()), 0.0});
      continue;
    }
    for (std::size_t i = 0; i < crossings.size(); ++i) {
      const double err = std::abs(crossings[i].fraction - spec.fractions[i]);
      out.push_back({base + " #" + std::to_string(i + 1), err <= tol, crossings[i].fraction,
                     spec.fractions[i], tol});
    }
  }
  return out;
}

std::vector<Check> verify_radial(const Construction& c, double tol)
{
  std::vector<Check> out;
  if (!c.radial || c.radial->radii.empty()) return out;
  const auto& spec = *c.radial;
  double norm = 0.0;
  for (double v : spec.direction) norm += v * v;
  norm = std::sqrt(norm);
  const double length = 1.5 * spec.radii.back();
  Point end(spec.origin.size());
  for (std::size_t i = 0; i < end.size(); ++i) end[i] = spec.origin[i] + length * spec.direction[i] / norm;

  const auto crossings = find_crossings(c.set, c.required_k, spec.origin, end, 8192);
  if (crossings.size() != spec.radii.size()) {
    out.push_back({"radial crossing count", false, static_cast<double>(crossings.size()),
                   static_cast<double>(spec.radii.size()), 0.0});
    return out;
  }
  for (std::size_t j = 0; j < crossings.size(); ++j) {
    const double r = crossings[j].fraction * length;
    const bool ordered = crossings[j].from_class == j && crossings[j].to_class == j + 1;
    out.push_back({"radial boundary " + std::to_string(j) + "->" + std::to_string(j + 1),
                   ordered && std::abs(r - spec.radii[j]) <= tol, r, spec.radii[j], tol});
  }
  return out;
}

std::vector<Check> verify_circle_separation(const Construction& c, std::size_t samples)
{
  std::vector<Check> out;
  for (const auto& circle : c.circles) {
    const auto wrong = circle_misclassifications(c.set, c.required_k, circle, samples);
    out.push_back({"circle r=" + format_number(circle.radius) + " class " +
                     std::to_string(circle.cls) + " misclassified of " + std::to_string(samples),
                   wrong == 0, static_cast<double>(wrong), 0.0, 0.0});
  }
  return out;
}

PrototypeSet rigid_motion(const PrototypeSet& set, double angle, std::span<const double> shift)
{
  if (set.dim != 2 || shift.size() != 2) throw Error("rigid_motion is two-dimensional");
  const double ca = std::cos(angle), sa = std::sin(angle);
  PrototypeSet out = set;
  for (auto& p : out.prototypes) {
    const double x = p.position[0], y = p.position[1];
    p.position = {ca * x - sa * y + shift[0], sa * x + ca * y + shift[1]};
  }
  return out;
}

PrototypeSet scale_labels(const PrototypeSet& set, double c)
{
  if (!(c > 0.0) || !std::isfinite(c)) throw Error("label scale must be a positive finite number");
  PrototypeSet out = set;
  for (auto& p : out.prototypes) {
    for (double& v : p.label.values) v *= c;
    p.label.kind = LabelKind::unrestricted;
  }
  return out;
}

PrototypeSet shift_labels(const PrototypeSet& set, double c)
{
  if (!std::isfinite(c)) throw Error("label shift must be finite");
  PrototypeSet out = set;
  for (auto& p : out.prototypes) {
    for (double& v : p.label.values) v += c;
    p.label.kind = LabelKind::unrestricted;
  }
  return out;
}

bool is_stable_query(const PrototypeSet& set, std::size_t k, std::span<const double> x)
{
  constexpr double kRelative = 1e-9;
  std::vector<double> dist;
  for (const auto& p : set.prototypes) dist.push_back(euclidean_distance(p.position, x));
  std::sort(dist.begin(), dist.end());
  if (dist.front() < 1e-6) return false;
  if (k < dist.size() && dist[k] - dist[k - 1] <= kRelative * dist[k]) return false;

  const auto result = classify(set, k, x);
  if (set.num_classes < 2) return true;
  double scale = 0.0;
  for (double s : result.scores) scale = std::max(scale, std::abs(s));
  return result.confidence > kRelative * std::max(scale, 1e-300);
}

namespace {

Point rotate_shift(std::span<const double> x, double angle, std::span<const double> shift)
{
  const double ca = std::cos(angle), sa = std::sin(angle);
  return {ca * x[0] - sa * x[1] + shift[0], sa * x[0] + ca * x[1] + shift[1]};
}

} // namespace

std::vector<Check> verify_invariances(const Construction& c, std::size_t trials, std::uint64_t seed,
                                      std::size_t queries_per_trial)
{
  const Bounds bounds = default_bounds(c);
  const std::size_t k = c.required_k;
  UnitRandom rng(seed);
  std::size_t rigid_bad = 0, scale_bad = 0, shift_bad = 0, evaluated = 0;

  for (std::size_t trial = 0; trial < trials; ++trial) {
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const Point shift{rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
    const double scale = std::exp(rng.uniform(-3.0, 3.0));
    const double offset = rng.uniform(-5.0, 5.0);

    const auto moved = rigid_motion(c.set, angle, shift);
    const auto scaled = scale_labels(c.set, scale);
    const auto shifted = shift_labels(c.set, offset);

    for (std::size_t q = 0; q < queries_per_trial; ++q) {
      const Point x{rng.uniform(bounds.xmin, bounds.xmax), rng.uniform(bounds.ymin, bounds.ymax)};
      if (!is_stable_query(c.set, k, x)) continue;
      ++evaluated;
      const auto base = classify(c.set, k, x).predicted;
      if (classify(moved, k, rotate_shift(x, angle, shift)).predicted != base) ++rigid_bad;
      if (classify(scaled, k, x).predicted != base) ++scale_bad;
      if (classify(shifted, k, x).predicted != base) ++shift_bad;
    }
  }

  const bool any = evaluated > 0;
  return {
    {"rigid_motion (" + std::to_string(evaluated) + " queries)", any && rigid_bad == 0,
     static_cast<double>(rigid_bad), 0.0, 0.0},
    {"label_scaling (" + std::to_string(evaluated) + " queries)", any && scale_bad == 0,
     static_cast<double>(scale_bad), 0.0, 0.0},
    {"label_shift (" + std::to_string(evaluated) + " queries)", any && shift_bad == 0,
     static_cast<double>(shift_bad), 0.0, 0.0},
  };
}

Report verify_construction(const Construction& c, const VerifyOptions& options)
{
  Report report;
  report.construction = c.kind.empty() ? c.set.name : c.kind;
  report.params = c.params;
  report.params.emplace_back("k", static_cast<double>(c.required_k));
  report.params.emplace_back("claimed_classes", static_cast<double>(c.claimed_classes));
  report.params.emplace_back("prototypes", static_cast<double>(c.set.size()));
  for (std::size_t i = 0; i < options.resolutions.size(); ++i)
    report.params.emplace_back("resolution_" + std::to_string(i), static_cast<double>(options.resolutions[i]));
  report.params.emplace_back("boundary_tol", options.boundary_tol);
  report.params.emplace_back("circle_samples", static_cast<double>(options.circle_samples));
  report.params.emplace_back("invariance_trials", static_cast<double>(options.invariance_trials));
  report.params.emplace_back("verify_seed", static_cast<double>(options.seed));
  const Bounds b = default_bounds(c);
  report.params.emplace_back("xmin", b.xmin);
  report.params.emplace_back("xmax", b.xmax);
  report.params.emplace_back("ymin", b.ymin);
  report.params.emplace_back("ymax", b.ymax);

  auto append = [&](std::vector<Check> more) {
    report.checks.insert(report.checks.end(), std::make_move_iterator(more.begin()),
                         std::make_move_iterator(more.end()));
  };
  append(verify_class_count(c, options.resolutions, options.partitions));
  append(verify_boundaries(c, options.boundary_tol));
  append(verify_radial(c, options.radial_tol));
  append(verify_circle_separation(c, options.circle_samples));
  if (c.fit_residual)
    report.checks.push_back({"fit_residual", *c.fit_residual < options.fit_tol, *c.fit_residual, 0.0,
                             options.fit_tol});
  if (options.invariance_trials > 0)
    append(verify_invariances(c, options.invariance_trials, options.seed));
  return report;
}

} // namespace slapknn
