#pragma once

#include "slapknn/classifier.hpp"
#include "slapknn/constructions.hpp"
#include "slapknn/core.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace slapknn {

/// Row-major class and confidence maps. Row 0 is the top edge (ymax); values are
/// sampled at cell centers.
struct RasterGrid
{
  Bounds bounds;
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t num_classes = 0;
  std::vector<std::size_t> classes;
  std::vector<double> confidence;
  /// Flat indices of cells whose center is an exact hit.
  std::vector<std::size_t> exact_hits;

  Point cell_center(std::size_t row, std::size_t col) const;
  std::size_t at(std::size_t row, std::size_t col) const { return classes[row * width + col]; }
};

/// `partitions` contiguous row bands evaluated on separate threads (0 = hardware
/// concurrency). The output does not depend on the partitioning.
RasterGrid rasterize(const PrototypeSet& set, std::size_t k, const Bounds& bounds,
                     std::size_t width, std::size_t height, std::size_t partitions = 0);

enum class RiskMode
{
  clip,
  log
};

RiskMode risk_mode_from_string(const std::string& name);

struct RiskOptions
{
  RiskMode mode = RiskMode::clip;
  /// Clip ceiling as a percentile of finite confidences, in (50, 100].
  double percentile = 99.0;
};

/// Risk intensity in [0,1]: 0 (black) is highest confidence, 1 (white) lowest.
/// Clip clamps confidence at the percentile ceiling; log uses log1p(confidence).
/// Exact hits map to 0.
std::vector<double> risk_render(const RasterGrid& grid, const RiskOptions& options = {});

/// Linear-interpolated percentile of the finite values.
double finite_percentile(std::span<const double> values, double percentile);

struct Crossing
{
  double fraction = 0.0;
  std::size_t from_class = 0;
  std::size_t to_class = 0;
};

inline constexpr std::size_t kDefaultScanSteps = 4096;

/// Every predicted-class change along a -> b, located by a uniform pre-scan and
/// bisection to 1e-12 of the segment.
std::vector<Crossing> find_crossings(const PrototypeSet& set, std::size_t k,
                                     std::span<const double> a, std::span<const double> b,
                                     std::size_t scan_steps = kDefaultScanSteps);

/// Fraction from a of the single class change on the segment, or of the single change
/// between the two classes of `class_pair` (either direction) when given. Throws if
/// there is no such change or more than one.
double boundary_bisect(const PrototypeSet& set, std::size_t k, std::span<const double> a,
                       std::span<const double> b,
                       std::optional<std::pair<std::size_t, std::size_t>> class_pair = std::nullopt,
                       std::size_t scan_steps = kDefaultScanSteps);

struct RegionReport
{
  std::size_t distinct_classes = 0;
  /// 4-connected components per present class.
  std::map<std::size_t, std::size_t> components_per_class;
  std::map<std::size_t, std::size_t> class_areas;

  std::size_t max_components() const;
};

RegionReport region_report(const RasterGrid& grid);

struct KSweepEntry
{
  std::size_t k = 0;
  RasterGrid grid;
  RegionReport report;
};

std::vector<KSweepEntry> k_sweep(const PrototypeSet& set, std::span<const std::size_t> k_values,
                                 const Bounds& bounds, std::size_t width, std::size_t height,
                                 std::size_t partitions = 0);

} // namespace slapknn
