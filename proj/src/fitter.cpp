#include "slapknn/fitter.hpp"

#include "slapknn/classifier.hpp"
#include "slapknn/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace slapknn {

namespace {

constexpr int kBisectionIterations = 80;

Point ray_point(const RadialFitOptions& opt, double r)
{
  Point x(opt.origin.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = opt.origin[i] + r * opt.direction[i];
  return x;
}

/// max_{c>j} s_c - max_{c<=j} s_c
double layer_gap(std::span<const double> scores, std::size_t j)
{
  double low = -std::numeric_limits<double>::infinity();
  double high = low;
  for (std::size_t c = 0; c <= j; ++c) low = std::max(low, scores[c]);
  for (std::size_t c = j + 1; c < scores.size(); ++c) high = std::max(high, scores[c]);
  return high - low;
}

std::vector<double> realized_radii(const PrototypeSet& set, std::size_t k,
                                   const RadialFitOptions& opt, double ray_length)
{
  const std::size_t n = set.num_classes;
  const std::size_t samples = std::max<std::size_t>(opt.scan_samples, 2);
  Scorer scorer(set, k);

  std::vector<double> grid(samples * n);
  for (std::size_t s = 0; s < samples; ++s) {
    const double r = ray_length * static_cast<double>(s + 1) / static_cast<double>(samples);
    scorer.scores(ray_point(opt, r), std::span<double>(grid).subspan(s * n, n));
  }

  std::vector<double> scratch(n);
  auto gap_at = [&](double r, std::size_t j) {
    scorer.scores(ray_point(opt, r), scratch);
    return layer_gap(scratch, j);
  };

  std::vector<double> out;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    std::size_t first = samples;
    for (std::size_t s = 0; s < samples; ++s) {
      if (layer_gap(std::span<const double>(grid).subspan(s * n, n), j) > 0.0) {
        first = s;
        break;
      }
    }
    if (first == samples) {
      out.push_back(ray_length);
      continue;
    }
    double hi = ray_length * static_cast<double>(first + 1) / static_cast<double>(samples);
    double lo = ray_length * static_cast<double>(first) / static_cast<double>(samples);
    if (first == 0) lo = 0.0;
    for (int it = 0; it < kBisectionIterations && hi - lo > 0.0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= 0.0) break;
      if (gap_at(mid, j) > 0.0) hi = mid;
      else lo = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

double rms_error(std::span<const double> realized, std::span<const double> targets)
{
  if (targets.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const double e = realized[j] - targets[j];
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(targets.size()));
}

PrototypeSet make_set(std::span<const Point> positions, std::size_t class_count)
{
  PrototypeSet set;
  set.dim = positions.front().size();
  set.num_classes = class_count;
  for (const auto& p : positions)
    set.prototypes.push_back({p, SoftLabel{std::vector<double>(class_count, 0.0), LabelKind::unrestricted}});
  return set;
}

void check_inputs(std::span<const Point> positions, std::size_t k, std::span<const double> targets,
                  std::size_t class_count, const RadialFitOptions& opt)
{
  if (positions.empty()) throw Error("fit needs at least one prototype");
  if (k < 1 || k > positions.size()) throw Error("fit k out of range");
  if (class_count < 1) throw Error("fit needs at least one class");
  if (targets.size() + 1 != class_count)
    throw Error("fit needs class_count - 1 target radii, got " + std::to_string(targets.size()));
  double prev = 0.0;
  for (double t : targets) {
    if (!(t > prev)) throw Error("target radii must be positive and strictly increasing");
    prev = t;
  }
  const std::size_t d = positions.front().size();
  if (opt.origin.size() != d || opt.direction.size() != d)
    throw Error("ray origin/direction dimension mismatch");
  double norm = 0.0;
  for (double v : opt.direction) norm += v * v;
  if (!(norm > 0.0)) throw Error("ray direction must be non-zero");
}

RadialFitOptions normalized(RadialFitOptions opt)
{
  double norm = 0.0;
  for (double v : opt.direction) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : opt.direction) v /= norm;
  return opt;
}

} // namespace

std::vector<double> realized_boundary_radii(std::span<const Point> positions,
                                            std::span<const SoftLabel> labels, std::size_t k,
                                            std::size_t class_count,
                                            const RadialFitOptions& options, double ray_length)
{
  if (labels.size() != positions.size()) throw Error("one label per position required");
  auto set = make_set(positions, class_count);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].size() != class_count) throw Error("label length does not match class_count");
    set.prototypes[i].label = labels[i];
  }
  return realized_radii(set, k, normalized(options), ray_length);
}

std::optional<std::vector<SoftLabel>>
hub_ring_labels(std::span<const Point> positions, std::size_t k,
                std::span<const double> target_radii, std::size_t class_count,
                const RadialFitOptions& options)
{
  check_inputs(positions, k, target_radii, class_count, options);
  const auto opt = normalized(options);

  std::size_t hub = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const double d = euclidean_distance(positions[i], opt.origin);
    if (d < best) {
      best = d;
      hub = i;
    }
  }

  auto set = make_set(positions, 1);
  std::vector<double> ratio;
  for (double r : target_radii) {
    const Point x = ray_point(opt, r);
    const auto order = neighbor_order(set, x);
    const auto first_k = std::span<const std::size_t>(order).first(k);
    if (std::find(first_k.begin(), first_k.end(), hub) == first_k.end()) return std::nullopt;
    const double d_hub = euclidean_distance(positions[hub], x);
    double inv = 0.0;
    for (std::size_t i : first_k)
      if (i != hub) inv += 1.0 / euclidean_distance(positions[i], x);
    ratio.push_back(d_hub * inv);
  }
  for (std::size_t j = 1; j < ratio.size(); ++j)
    if (!(ratio[j] > ratio[j - 1])) return std::nullopt;

  const double scale = 1.0 / static_cast<double>(std::max<std::size_t>(class_count - 1, 1));
  std::vector<double> hub_values(class_count, 0.0), ring_values(class_count, 0.0);
  for (std::size_t j = 0; j < class_count; ++j) ring_values[j] = static_cast<double>(j) * scale;
  for (std::size_t j = 0; j + 1 < class_count; ++j) hub_values[j + 1] = hub_values[j] - ratio[j] * scale;

  std::vector<SoftLabel> out;
  for (std::size_t i = 0; i < positions.size(); ++i)
    out.push_back(SoftLabel::unrestricted(i == hub ? hub_values : ring_values));
  return out;
}

RadialFitResult fit_radial_labels(std::span<const Point> positions, std::size_t k,
                                  std::span<const double> target_radii, std::size_t class_count,
                                  const RadialFitOptions& options)
{
  check_inputs(positions, k, target_radii, class_count, options);
  const auto opt = normalized(options);
  const double ray_length = opt.ray_length > 0.0
                              ? opt.ray_length
                              : (target_radii.empty() ? 1.0 : 2.0 * target_radii.back());
  const std::size_t m = positions.size();

  auto set = make_set(positions, class_count);
  auto load = [&](const std::vector<double>& flat) {
    for (std::size_t i = 0; i < m; ++i)
      std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(i * class_count), class_count,
                  set.prototypes[i].label.values.begin());
  };
  auto evaluate = [&](const std::vector<double>& flat) {
    load(flat);
    return rms_error(realized_radii(set, k, opt, ray_length), target_radii);
  };

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<double> start(m * class_count, 0.0);
  std::optional<std::vector<SoftLabel>> seeded = opt.initial;
  if (!seeded) seeded = hub_ring_labels(positions, k, target_radii, class_count, opt);
  if (seeded) {
    if (seeded->size() != m) throw Error("initial labels: one per prototype required");
    for (std::size_t i = 0; i < m; ++i) {
      if ((*seeded)[i].size() != class_count) throw Error("initial label has wrong length");
      std::copy((*seeded)[i].values.begin(), (*seeded)[i].values.end(),
                start.begin() + static_cast<std::ptrdiff_t>(i * class_count));
    }
  } else {
    for (double& v : start) v = noise(rng);
  }

  RadialFitResult result;
  std::vector<double> best_flat = start;
  double best_residual = evaluate(start);
  const double good_enough = opt.tolerance * 1e-3;

  for (std::size_t restart = 0; restart <= opt.max_restarts; ++restart) {
    std::vector<double> flat = best_flat;
    if (restart > 0) {
      double magnitude = 0.0;
      for (double v : best_flat) magnitude = std::max(magnitude, std::abs(v));
      const double sigma = opt.initial_step * std::max(magnitude, 1.0);
      for (double& v : flat) v += sigma * noise(rng);
    }
    double residual = evaluate(flat);
    result.restart_offsets.push_back(result.audit.size());
    result.audit.push_back(residual);
    result.restarts_used = restart;

    double magnitude = 0.0;
    for (double v : flat) magnitude = std::max(magnitude, std::abs(v));
    double step = opt.initial_step * std::max(magnitude, 1.0);
    std::size_t sweeps = 0;
    while (residual > good_enough && step >= opt.min_step && sweeps < opt.max_sweeps) {
      ++sweeps;
      bool improved = false;
      for (std::size_t e = 0; e < flat.size(); ++e) {
        for (double sign : {1.0, -1.0}) {
          const double saved = flat[e];
          flat[e] = saved + sign * step;
          const double trial = evaluate(flat);
          if (trial < residual) {
            residual = trial;
            result.audit.push_back(residual);
            improved = true;
            break;
          }
          flat[e] = saved;
        }
      }
      if (!improved) step *= 0.5;
    }

    if (residual <= best_residual) {
      best_residual = residual;
      best_flat = flat;
    }
    if (best_residual <= opt.tolerance) break;
  }

  load(best_flat);
  for (const auto& p : set.prototypes) result.labels.push_back(p.label);
  result.realized = realized_radii(set, k, opt, ray_length);
  result.residual = rms_error(result.realized, target_radii);
  if (!(result.residual <= opt.tolerance))
    throw FitError("radial fit did not converge: residual " + format_number(result.residual) +
                     " > tolerance " + format_number(opt.tolerance),
                   std::move(result));
  return result;
}

} // namespace slapknn
