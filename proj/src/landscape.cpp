#include "slapknn/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace slapknn {

Point RasterGrid::cell_center(std::size_t row, std::size_t col) const
{
  const double x = bounds.xmin + (static_cast<double>(col) + 0.5) * (bounds.xmax - bounds.xmin) /
                                   static_cast<double>(width);
  const double y = bounds.ymax - (static_cast<double>(row) + 0.5) * (bounds.ymax - bounds.ymin) /
                                   static_cast<double>(height);
  return {x, y};
}

RasterGrid rasterize(const PrototypeSet& set, std::size_t k, const Bounds& bounds,
                     std::size_t width, std::size_t height, std::size_t partitions)
{
  if (set.dim != 2) throw Error("rasterize needs two-dimensional prototypes");
  if (!bounds.well_ordered() || !std::isfinite(bounds.xmin) || !std::isfinite(bounds.xmax) ||
      !std::isfinite(bounds.ymin) || !std::isfinite(bounds.ymax))
    throw Error("raster bounds must be finite and well ordered");
  if (width < 2 || height < 2) throw Error("raster width and height must be at least 2");
  check_query(set, k, std::vector<double>{0.0, 0.0});

  RasterGrid grid;
  grid.bounds = bounds;
  grid.width = width;
  grid.height = height;
  grid.num_classes = set.num_classes;
  grid.classes.assign(width * height, 0);
  grid.confidence.assign(width * height, 0.0);

  if (partitions == 0) partitions = std::max(1u, std::thread::hardware_concurrency());
  partitions = std::min(partitions, height);

  std::vector<std::vector<std::size_t>> hits(partitions);
  auto work = [&](std::size_t part, std::size_t row_begin, std::size_t row_end) {
    Scorer scorer(set, k);
    for (std::size_t row = row_begin; row < row_end; ++row) {
      for (std::size_t col = 0; col < width; ++col) {
        const auto result = scorer.classify(grid.cell_center(row, col));
        const std::size_t idx = row * width + col;
        grid.classes[idx] = result.predicted;
        grid.confidence[idx] = result.confidence;
        if (result.exact_hit) hits[part].push_back(idx);
      }
    }
  };

  const std::size_t rows_per = (height + partitions - 1) / partitions;
  {
    std::vector<std::jthread> workers;
    for (std::size_t p = 1; p < partitions; ++p) {
      const std::size_t begin = p * rows_per;
      if (begin >= height) break;
      workers.emplace_back(work, p, begin, std::min(begin + rows_per, height));
    }
    work(0, 0, std::min(rows_per, height));
  }
  for (auto& h : hits) grid.exact_hits.insert(grid.exact_hits.end(), h.begin(), h.end());
  return grid;
}

RiskMode risk_mode_from_string(const std::string& name)
{
  if (name == "clip") return RiskMode::clip;
  if (name == "log") return RiskMode::log;
  throw Error("unknown risk mode '" + name + "' (expected clip or log)");
}

double finite_percentile(std::span<const double> values, double percentile)
{
  std::vector<double> finite;
  finite.reserve(values.size());
  for (double v : values)
    if (std::isfinite(v)) finite.push_back(v);
  if (finite.empty()) return 0.0;
  std::sort(finite.begin(), finite.end());
  const double pos = percentile / 100.0 * static_cast<double>(finite.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, finite.size() - 1);
  const double t = pos - static_cast<double>(lo);
  return finite[lo] + t * (finite[hi] - finite[lo]);
}

std::vector<double> risk_render(const RasterGrid& grid, const RiskOptions& options)
{
  if (grid.confidence.empty() || grid.confidence.size() != grid.width * grid.height)
    throw Error("risk_render needs a populated grid");
  if (options.mode == RiskMode::clip && !(options.percentile > 50.0 && options.percentile <= 100.0))
    throw Error("clip percentile must lie in (50, 100]");

  std::vector<double> out(grid.confidence.size());
  if (options.mode == RiskMode::clip) {
    const double ceiling = finite_percentile(grid.confidence, options.percentile);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double c = grid.confidence[i];
      if (!(ceiling > 0.0)) out[i] = std::isfinite(c) && c <= 0.0 ? 1.0 : 0.0;
      else out[i] = 1.0 - std::min(c, ceiling) / ceiling;
    }
  } else {
    double top = 0.0;
    for (double c : grid.confidence)
      if (std::isfinite(c)) top = std::max(top, std::log1p(c));
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double c = grid.confidence[i];
      if (!(top > 0.0)) out[i] = std::isfinite(c) ? 1.0 : 0.0;
      else out[i] = std::isfinite(c) ? 1.0 - std::log1p(c) / top : 0.0;
    }
  }
  return out;
}

namespace {

Point lerp(std::span<const double> a, std::span<const double> b, double t)
{
  Point x(a.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = a[i] + t * (b[i] - a[i]);
  return x;
}

} // namespace

std::vector<Crossing> find_crossings(const PrototypeSet& set, std::size_t k,
                                     std::span<const double> a, std::span<const double> b,
                                     std::size_t scan_steps)
{
  check_query(set, k, a);
  check_query(set, k, b);
  if (scan_steps < 1) throw Error("scan_steps must be positive");
  Scorer scorer(set, k);
  auto cls = [&](double t) { return scorer.classify(lerp(a, b, t)).predicted; };

  std::vector<Crossing> out;
  double prev_t = 0.0;
  std::size_t prev_c = cls(0.0);
  for (std::size_t s = 1; s <= scan_steps; ++s) {
    const double t = static_cast<double>(s) / static_cast<double>(scan_steps);
    const std::size_t c = cls(t);
    if (c != prev_c) {
      double lo = prev_t, hi = t;
      for (int it = 0; it < 64 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cls(mid) == prev_c) lo = mid;
        else hi = mid;
      }
      out.push_back({0.5 * (lo + hi), prev_c, c});
    }
    prev_t = t;
    prev_c = c;
  }
  return out;
}

double boundary_bisect(const PrototypeSet& set, std::size_t k, std::span<const double> a,
                       std::span<const double> b,
                       std::optional<std::pair<std::size_t, std::size_t>> class_pair,
                       std::size_t scan_steps)
{
  auto crossings = find_crossings(set, k, a, b, scan_steps);
  if (class_pair) {
    const auto [p, q] = *class_pair;
    std::erase_if(crossings, [&](const Crossing& c) {
      return !((c.from_class == p && c.to_class == q) || (c.from_class == q && c.to_class == p));
    });
  }
  if (crossings.empty()) throw Error("no class change on the segment");
  if (crossings.size() > 1)
    throw Error(std::to_string(crossings.size()) +
                " class changes on the segment; pass a class pair or split the segment");
  return crossings.front().fraction;
}

std::size_t RegionReport::max_components() const
{
  std::size_t out = 0;
  for (const auto& [cls, n] : components_per_class) out = std::max(out, n);
  return out;
}

RegionReport region_report(const RasterGrid& grid)
{
  RegionReport report;
  const std::size_t w = grid.width, h = grid.height;
  std::vector<bool> seen(w * h, false);
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < w * h; ++start) {
    ++report.class_areas[grid.classes[start]];
    if (seen[start]) continue;
    const std::size_t cls = grid.classes[start];
    ++report.components_per_class[cls];
    seen[start] = true;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t idx = stack.back();
      stack.pop_back();
      const std::size_t row = idx / w, col = idx % w;
      auto visit = [&](std::size_t n) {
        if (!seen[n] && grid.classes[n] == cls) {
          seen[n] = true;
          stack.push_back(n);
        }
      };
      if (col > 0) visit(idx - 1);
      if (col + 1 < w) visit(idx + 1);
      if (row > 0) visit(idx - w);
      if (row + 1 < h) visit(idx + w);
    }
  }
  report.distinct_classes = report.class_areas.size();
  return report;
}

std::vector<KSweepEntry> k_sweep(const PrototypeSet& set, std::span<const std::size_t> k_values,
                                 const Bounds& bounds, std::size_t width, std::size_t height,
                                 std::size_t partitions)
{
  std::vector<KSweepEntry> out;
  for (std::size_t k : k_values) {
    KSweepEntry entry;
    entry.k = k;
    entry.grid = rasterize(set, k, bounds, width, height, partitions);
    entry.report = region_report(entry.grid);
    out.push_back(std::move(entry));
  }
  return out;
}

} // namespace slapknn
