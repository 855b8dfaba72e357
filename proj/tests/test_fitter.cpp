#include "slapknn/constructions.hpp"
#include "slapknn/fitter.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace slapknn;

namespace {

const std::vector<Point> kLine{{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}};

RadialFitOptions vertical()
{
  RadialFitOptions o;
  o.direction = {0.0, 1.0};
  return o;
}

} // namespace

TEST(Fitter, HubRingClosedFormHitsTargets)
{
  const std::vector<double> targets{0.15, 0.3, 0.45};
  const auto opts = vertical();
  const auto labels = hub_ring_labels(kLine, 3, targets, 4, opts);
  ASSERT_TRUE(labels);
  const auto realized = realized_boundary_radii(kLine, *labels, 3, 4, opts, 0.9);
  ASSERT_EQ(realized.size(), targets.size());
  for (std::size_t j = 0; j < targets.size(); ++j) EXPECT_NEAR(realized[j], targets[j], 1e-9);
}

TEST(Fitter, GoodStartIsAFixedPoint)
{
  const std::vector<double> targets{0.15, 0.3, 0.45};
  auto opts = vertical();
  opts.initial = hub_ring_labels(kLine, 3, targets, 4, opts);
  const auto fit = fit_radial_labels(kLine, 3, targets, 4, opts);
  EXPECT_LT(fit.residual, 1e-6);
  EXPECT_EQ(fit.restarts_used, 0u);
}

TEST(Fitter, RecoversFromPerturbedLabels)
{
  const std::vector<double> targets{0.15, 0.3, 0.45};
  auto opts = vertical();
  auto labels = *hub_ring_labels(kLine, 3, targets, 4, opts);
  std::mt19937_64 rng(21);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (auto& l : labels)
    for (double& v : l.values) v += noise(rng);
  opts.initial = labels;
  const auto fit = fit_radial_labels(kLine, 3, targets, 4, opts);
  EXPECT_LT(fit.residual, 1e-3);
  ASSERT_EQ(fit.realized.size(), targets.size());

  // Within a restart the audit trail never increases.
  ASSERT_FALSE(fit.restart_offsets.empty());
  for (std::size_t r = 0; r < fit.restart_offsets.size(); ++r) {
    const std::size_t begin = fit.restart_offsets[r];
    const std::size_t end = r + 1 < fit.restart_offsets.size() ? fit.restart_offsets[r + 1] : fit.audit.size();
    for (std::size_t i = begin + 1; i < end; ++i) EXPECT_LE(fit.audit[i], fit.audit[i - 1]);
  }
}

TEST(Fitter, DeterministicForSeed)
{
  const std::vector<double> targets{0.1, 0.2, 0.3, 0.4};
  auto opts = vertical();
  opts.seed = 4;
  const auto a = fit_radial_labels(kLine, 3, targets, 5, opts);
  const auto b = fit_radial_labels(kLine, 3, targets, 5, opts);
  ASSERT_EQ(a.labels.size(), b.labels.size());
  for (std::size_t i = 0; i < a.labels.size(); ++i) EXPECT_EQ(a.labels[i].values, b.labels[i].values);
  EXPECT_EQ(a.audit, b.audit);
}

TEST(Fitter, SixCircles)
{
  const double far = 21.0;
  const std::vector<Point> pos{{0.0, 0.0}, {far, 0.0}, {0.0, far}, {-far, 0.0}, {0.0, -far}};
  const std::vector<double> targets{1.5, 2.5, 3.5, 4.5, 5.5};
  RadialFitOptions opts;
  opts.direction = {std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2};
  const auto fit = fit_radial_labels(pos, 5, targets, 6, opts);
  EXPECT_LT(fit.residual, 1e-3);
  for (const auto& l : fit.labels) EXPECT_EQ(l.kind, LabelKind::unrestricted);
}

TEST(Fitter, RejectsBadInput)
{
  const std::vector<double> targets{0.2, 0.1};
  EXPECT_THROW(fit_radial_labels(kLine, 3, targets, 3, vertical()), Error);
  const std::vector<double> ok{0.1, 0.2};
  EXPECT_THROW(fit_radial_labels(kLine, 3, ok, 4, vertical()), Error);
  EXPECT_THROW(fit_radial_labels(kLine, 4, ok, 3, vertical()), Error);
  const std::vector<double> negative{-0.1, 0.2};
  EXPECT_THROW(fit_radial_labels(kLine, 3, negative, 3, vertical()), Error);
}

TEST(Fitter, UnreachableTargetsThrowWithBest)
{
  // A single prototype never changes class, so nothing can be separated.
  const std::vector<Point> one{{0.0, 0.0}};
  const std::vector<double> targets{0.5};
  auto opts = vertical();
  opts.max_restarts = 2;
  opts.max_sweeps = 20;
  try {
    fit_radial_labels(one, 1, targets, 2, opts);
    FAIL() << "expected FitError";
  } catch (const FitError& e) {
    EXPECT_GT(e.best().residual, 1e-3);
  }
}
