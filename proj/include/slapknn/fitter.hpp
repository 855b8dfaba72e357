#pragma once

#include "slapknn/core.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace slapknn {

struct RadialFitOptions
{
  Point origin{0.0, 0.0};
  Point direction{1.0, 0.0};
  /// Ray is scanned over (0, ray_length]; 0 means twice the last target.
  double ray_length = 0.0;
  std::size_t scan_samples = 2048;
  double tolerance = 1e-3;
  std::size_t max_restarts = 6;
  std::size_t max_sweeps = 400;
  double initial_step = 0.25;
  double min_step = 1e-12;
  std::uint64_t seed = 0;
  /// Starting labels; when absent the hub/ring closed form is tried, then random.
  std::optional<std::vector<SoftLabel>> initial;
};

struct RadialFitResult
{
  std::vector<SoftLabel> labels;
  /// RMS of realized minus target boundary radii.
  double residual = 0.0;
  std::vector<double> realized;
  /// Residual after every accepted descent step, per restart (restarts concatenated).
  std::vector<double> audit;
  /// Index into audit where each restart begins.
  std::vector<std::size_t> restart_offsets;
  std::size_t restarts_used = 0;
};

class FitError : public Error
{
public:
  FitError(const std::string& msg, RadialFitResult best)
    : Error(msg), best_(std::move(best))
  {
  }
  const RadialFitResult& best() const { return best_; }

private:
  RadialFitResult best_;
};

/// Fits unrestricted labels so that, along the ray, the predicted class changes from
/// j to j+1 at target_radii[j]. Coordinate descent over every label entry with
/// seeded random restarts. Throws FitError if the residual stays above tolerance.
RadialFitResult fit_radial_labels(std::span<const Point> positions, std::size_t k,
                                  std::span<const double> target_radii, std::size_t class_count,
                                  const RadialFitOptions& options = {});

/// Radii where the layered class boundary j -> j+1 is crossed along the ray, found by
/// scanning max_{c>j} score - max_{c<=j} score for its first sign change and bisecting.
std::vector<double> realized_boundary_radii(std::span<const Point> positions,
                                            std::span<const SoftLabel> labels, std::size_t k,
                                            std::size_t class_count,
                                            const RadialFitOptions& options,
                                            double ray_length);

/// Closed-form start for a hub (prototype nearest the origin) and ring layout:
/// class scores are lines u_j + v_j * rho(r) with rho = d_hub * sum_{others in kNN} 1/d.
/// Returns nullopt when rho is not increasing through the targets.
std::optional<std::vector<SoftLabel>>
hub_ring_labels(std::span<const Point> positions, std::size_t k,
                std::span<const double> target_radii, std::size_t class_count,
                const RadialFitOptions& options);

} // namespace slapknn
