#pragma once

#include "slapknn/core.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace slapknn {

/// Queries closer than this to a prototype take that prototype's label argmax.
inline constexpr double kExactHitDistance = 1e-12;

/// Confidence reported for exact hits and single-class sets.
inline constexpr double kConfidenceSentinel = std::numeric_limits<double>::infinity();

struct Classification
{
  /// Y*, the inverse-distance weighted sum of the k nearest labels.
  /// At an exact hit this holds the hit prototype's label values instead.
  std::vector<double> scores;
  std::size_t predicted = 0;
  /// Largest minus second-largest score.
  double confidence = 0.0;
  bool exact_hit = false;
};

/// Throws Error unless 1 <= k <= set.size() and x has dimension set.dim.
void check_query(const PrototypeSet& set, std::size_t k, std::span<const double> x);

/// Prototype indices ordered by (distance to x, index).
std::vector<std::size_t> neighbor_order(const PrototypeSet& set, std::span<const double> x);

std::vector<double> score_vector(const PrototypeSet& set, std::size_t k, std::span<const double> x);

Classification classify(const PrototypeSet& set, std::size_t k, std::span<const double> x);

/// Same results as calling classify on each point in order. `partitions` splits the
/// work into contiguous chunks run on separate threads (0 = hardware concurrency).
std::vector<Classification> classify_batch(const PrototypeSet& set, std::size_t k,
                                           std::span<const Point> points,
                                           std::size_t partitions = 0);

/// Reusable scratch space for hot loops (rasterization, ray scans).
class Scorer
{
public:
  Scorer(const PrototypeSet& set, std::size_t k);

  /// Writes scores into `out` (size num_classes); returns the exact-hit prototype
  /// index or npos.
  std::size_t scores(std::span<const double> x, std::span<double> out);

  Classification classify(std::span<const double> x);

  std::size_t num_classes() const { return set_->num_classes; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
  const PrototypeSet* set_;
  std::size_t k_;
  std::vector<std::pair<double, std::size_t>> order_;
};

} // namespace slapknn
