#pragma once

#include "slapknn/constructions.hpp"
#include "slapknn/core.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace slapknn {

struct Check
{
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double expected = 0.0;
  double tol = 0.0;
};

struct Report
{
  std::string construction;
  Params params;
  std::vector<Check> checks;

  bool pass() const;
};

std::string report_json(const Report& report, int indent = 2);

/// Distinct classes over default_bounds(c) at each resolution (square rasters).
std::vector<Check> verify_class_count(const Construction& c,
                                      std::span<const std::size_t> resolutions = {},
                                      std::size_t partitions = 0);

inline constexpr double kBoundaryTolerance = 1e-6;

/// Crossing fractions along every boundary spec segment.
std::vector<Check> verify_boundaries(const Construction& c, double tol = kBoundaryTolerance);

/// Class changes along the radial spec ray against its target radii.
std::vector<Check> verify_radial(const Construction& c, double tol = 1e-3);

inline constexpr std::size_t kCircleSamples = 10000;

/// One check per circle: misclassified samples out of `samples` equally spaced angles.
std::vector<Check> verify_circle_separation(const Construction& c,
                                            std::size_t samples = kCircleSamples);

/// Random rotation + translation of prototypes and queries.
PrototypeSet rigid_motion(const PrototypeSet& set, double angle, std::span<const double> shift);
/// Multiplies every label by c > 0; throws Error otherwise.
PrototypeSet scale_labels(const PrototypeSet& set, double c);
/// Adds c to every label element. Result labels are unrestricted.
PrototypeSet shift_labels(const PrototypeSet& set, double c);

/// Queries with a relative top-score gap and k-th/(k+1)-th distance gap above 1e-9,
/// i.e. whose class cannot flip under rounding.
bool is_stable_query(const PrototypeSet& set, std::size_t k, std::span<const double> x);

/// Seeded uniform doubles in [0,1) from raw mt19937_64 draws. The engine output is
/// fixed by the standard, unlike std::uniform_real_distribution.
class UnitRandom
{
public:
  explicit UnitRandom(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
  std::mt19937_64 engine_;
};

/// rigid_motion, label_scaling and label_shift checks; observed = mismatching queries.
std::vector<Check> verify_invariances(const Construction& c, std::size_t trials,
                                      std::uint64_t seed, std::size_t queries_per_trial = 32);

struct VerifyOptions
{
  std::vector<std::size_t> resolutions{512, 1024};
  double boundary_tol = kBoundaryTolerance;
  double radial_tol = 1e-3;
  double fit_tol = 1e-3;
  std::size_t circle_samples = kCircleSamples;
  std::size_t invariance_trials = 100;
  std::uint64_t seed = 0;
  std::size_t partitions = 0;
};

/// Every applicable verifier for the construction.
Report verify_construction(const Construction& c, const VerifyOptions& options = {});

} // namespace slapknn
