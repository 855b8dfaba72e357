#include "slapknn/constructions.hpp"
#include "slapknn/landscape.hpp"
#include "slapknn/serialize.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace slapknn;
using oracle::Rational;

namespace {

// y_1i = sum_{j=i}^{n-1} j / sum_{j=1}^{n-1} j^2
std::vector<Rational> n_from_two_oracle(long long n)
{
  if (n == 1) return {Rational(1)};
  long long squares = 0;
  for (long long j = 1; j < n; ++j) squares += j * j;
  std::vector<Rational> out;
  for (long long i = 1; i <= n; ++i) {
    long long tail = 0;
    for (long long j = i; j < n; ++j) tail += j;
    out.emplace_back(tail, squares);
  }
  return out;
}

std::vector<double> along_segment(const Construction& c, std::size_t from, std::size_t to)
{
  const auto& a = c.set.prototypes[from].position;
  const auto& b = c.set.prototypes[to].position;
  std::vector<double> out;
  for (const auto& x : find_crossings(c.set, c.required_k, a, b)) out.push_back(x.fraction);
  return out;
}

} // namespace

TEST(ThreeFromTwo, LabelsAndBoundaries)
{
  const auto c = three_from_two();
  EXPECT_TRUE(construction_violations(c).empty());
  EXPECT_EQ(c.set.prototypes[0].label.values, (std::vector<double>{0.6, 0.4, 0.0}));
  EXPECT_EQ(c.set.prototypes[1].label.values, (std::vector<double>{0.0, 0.4, 0.6}));
  const auto f = along_segment(c, 0, 1);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_NEAR(f[0], 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(f[1], 2.0 / 3.0, 1e-9);

  const auto scaled = three_from_two(0.01);
  const auto g = along_segment(scaled, 0, 1);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_NEAR(g[0], 1.0 / 3.0, 1e-9);
  EXPECT_THROW(three_from_two(0.0), Error);
  EXPECT_THROW(three_from_two(-1.0), Error);
}

TEST(NFromTwo, LabelsMatchSumForm)
{
  for (long long n = 1; n <= 12; ++n) {
    const auto want = n_from_two_oracle(n);
    const auto exact = n_from_two_label_fractions(static_cast<std::size_t>(n));
    ASSERT_EQ(exact.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
      EXPECT_EQ(Rational(exact[i].first, exact[i].second), want[i]) << "n=" << n << " i=" << i;

    const auto c = n_from_two(static_cast<std::size_t>(n));
    EXPECT_TRUE(construction_violations(c).empty());
    const auto& first = c.set.prototypes[0].label.values;
    const auto& second = c.set.prototypes[1].label.values;
    Rational total(0);
    for (std::size_t i = 0; i < want.size(); ++i) {
      EXPECT_DOUBLE_EQ(first[i], want[i].value());
      EXPECT_EQ(second[i], first[want.size() - 1 - i]);
      if (i > 0) EXPECT_LT(first[i], first[i - 1]);
      total = total + want[i];
    }
    EXPECT_EQ(total, Rational(1));
    EXPECT_EQ(c.set.prototypes[1].position[0], static_cast<double>(n));
  }
}

TEST(NFromTwo, PrintedSolutions)
{
  using F = std::vector<std::pair<long long, long long>>;
  EXPECT_EQ(n_from_two_label_fractions(3), (F{{3, 5}, {2, 5}, {0, 5}}));
  EXPECT_EQ(n_from_two_label_fractions(4), (F{{6, 14}, {5, 14}, {3, 14}, {0, 14}}));
}

TEST(NFromTwo, CrossingsAtEvenFractions)
{
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto f = along_segment(n_from_two(n), 0, 1);
    ASSERT_EQ(f.size(), n - 1) << n;
    for (std::size_t i = 0; i + 1 < n; ++i)
      EXPECT_NEAR(f[i], static_cast<double>(i + 1) / static_cast<double>(n), 1e-9);
  }
  EXPECT_THROW(n_from_two(0), Error);
  EXPECT_THROW(n_from_two(3, 0.0), Error);
}

TEST(StarPairs, LabelsAndFractions)
{
  for (std::size_t m = 2; m <= 8; ++m) {
    for (double p : {1.0, 2.0}) {
      const auto c = star_pairs(m, p);
      EXPECT_TRUE(construction_violations(c).empty());
      EXPECT_EQ(c.claimed_classes, 2 * m - 1);
      const auto& center = c.set.prototypes[0].label.values;
      const double den = 2.0 * static_cast<double>(m) + 1.0;
      EXPECT_DOUBLE_EQ(center[0], 3.0 / den);
      for (std::size_t i = 0; i + 1 < m; ++i) EXPECT_DOUBLE_EQ(center[m + i], 2.0 / den);

      // Scores on the spoke to outer i at distance t from the center, exact labels.
      const Rational cown(3, 2 * static_cast<long long>(m) + 1), cpair(2, 2 * static_cast<long long>(m) + 1);
      const Rational oown(3, 5), opair(2, 5);
      auto own_center = [&](double t) { return cown.value() / t; };
      auto pair = [&](double t) { return cpair.value() / t + opair.value() / (p - t); };
      auto own_outer = [&](double t) { return oown.value() / (p - t); };
      const double inner = oracle::bisect([&](double t) { return own_center(t) - pair(t); }, 1e-9 * p, p / 2);
      const double outer = oracle::bisect([&](double t) { return pair(t) - own_outer(t); }, inner, p - 1e-9 * p);

      for (std::size_t i = 0; i + 1 < m; ++i) {
        const auto f = along_segment(c, 0, 1 + i);
        ASSERT_EQ(f.size(), 2u) << m;
        EXPECT_NEAR(f[0] * p, inner, 1e-9);
        EXPECT_NEAR(f[1] * p, outer, 1e-9);
      }
      const double fm = static_cast<double>(m);
      EXPECT_NEAR(inner, 5.0 * p / (4.0 * fm + 7.0), 1e-12);
      EXPECT_NEAR(outer, 10.0 * p / (2.0 * fm + 11.0), 1e-12);
    }
  }
}

TEST(StarPairs, InnerFractionDilutes)
{
  double previous = 1.0;
  for (std::size_t m = 2; m <= 20; ++m) {
    const double f = star_pairs(m).boundaries.front().fractions.front();
    EXPECT_LT(f, previous);
    previous = f;
  }
  EXPECT_NEAR(star_pairs(4).boundaries[0].fractions[0], 5.0 / 23.0, 1e-15);
  EXPECT_NEAR(star_pairs(4).boundaries[0].fractions[1], 10.0 / 19.0, 1e-15);
  EXPECT_THROW(star_pairs(1), Error);
}

TEST(PolygonPairs, EdgeFractionsIndependentOfM)
{
  for (std::size_t m = 3; m <= 12; ++m) {
    const auto c = polygon_pairs(m);
    EXPECT_TRUE(construction_violations(c).empty());
    EXPECT_EQ(c.claimed_classes, 2 * m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto f = along_segment(c, i, (i + 1) % m);
      ASSERT_EQ(f.size(), 2u);
      EXPECT_NEAR(f[0], 1.0 / 3.0, 1e-9);
      EXPECT_NEAR(f[1], 2.0 / 3.0, 1e-9);
    }
  }
  EXPECT_THROW(polygon_pairs(2), Error);
}

TEST(PolygonWithCenter, LabelLayout)
{
  for (std::size_t m = 4; m <= 9; ++m) {
    const auto c = polygon_with_center(m);
    EXPECT_TRUE(construction_violations(c).empty());
    EXPECT_EQ(c.required_k, m);
    EXPECT_EQ(c.claimed_classes, 3 * m - 2);
    EXPECT_EQ(c.set.size(), m);
    const std::size_t v = m - 1;
    for (std::size_t i = 0; i < v; ++i) {
      const auto& y = c.set.prototypes[1 + i].label.values;
      EXPECT_DOUBLE_EQ(y[1 + i], 4.0 / 13.0);
      EXPECT_DOUBLE_EQ(y[v + 1 + i], 3.0 / 13.0);
    }
  }
  EXPECT_THROW(polygon_with_center(3), Error);
}

TEST(CircleHard, CountsMatchBound)
{
  const std::vector<std::size_t> want{3, 7, 10, 13, 16, 19};
  for (std::size_t t = 1; t <= want.size(); ++t) EXPECT_EQ(circle_hard_count(t), want[t - 1]);
  // Smallest n with 2t sin(pi/(2n)) <= 1.
  for (std::size_t t = 2; t <= 40; ++t) {
    const double ft = static_cast<double>(t);
    const auto n = static_cast<double>(circle_hard_count(t));
    EXPECT_LE(2.0 * ft * std::sin(std::numbers::pi / (2.0 * n)), 1.0 + 1e-12) << t;
    EXPECT_GT(2.0 * ft * std::sin(std::numbers::pi / (2.0 * (n - 1.0))), 1.0) << t;
  }
  EXPECT_THROW(circle_hard_count(0), Error);

  const auto c = circle_hard_baseline(6);
  EXPECT_EQ(c.set.size(), 68u);
  EXPECT_LE(c.set.size(), static_cast<std::size_t>(std::ceil(6 * 7 * std::numbers::pi / 2)) + 6);
  for (const auto& circle : c.circles) EXPECT_EQ(circle_misclassifications(c.set, 1, circle, 2000), 0u);
}

TEST(CircleSoft, FiveFittedPrototypes)
{
  const auto c = circle_soft(6);
  EXPECT_EQ(c.set.size(), 5u);
  EXPECT_EQ(c.required_k, 5u);
  ASSERT_TRUE(c.fit_residual);
  EXPECT_LT(*c.fit_residual, 1e-3);
  for (const auto& circle : c.circles) EXPECT_EQ(circle_misclassifications(c.set, 5, circle, 2000), 0u);
}

TEST(ConcentricEllipses, Fitted)
{
  const auto c = concentric_ellipses(5);
  EXPECT_EQ(c.set.size(), 3u);
  ASSERT_TRUE(c.fit_residual);
  EXPECT_LT(*c.fit_residual, 1e-3);
  ASSERT_TRUE(c.radial);
  EXPECT_EQ(c.radial->radii.size(), 4u);
}

TEST(Bounds, DefaultPadding)
{
  const auto b = default_bounds(three_from_two().set);
  EXPECT_DOUBLE_EQ(b.xmin, -0.75);
  EXPECT_DOUBLE_EQ(b.xmax, 3.75);
  EXPECT_DOUBLE_EQ(b.ymin, -0.75);
  EXPECT_DOUBLE_EQ(b.ymax, 0.75);

  PrototypeSet one;
  one.dim = 2;
  one.num_classes = 1;
  one.prototypes = {{{2.0, -1.0}, SoftLabel::hard(1, 0)}};
  EXPECT_EQ(default_bounds(one), (Bounds{1.0, 3.0, -2.0, 0.0}));

  const auto circ = circle_hard_baseline(2);
  EXPECT_EQ(default_bounds(circ), (Bounds{-3.0, 3.0, -3.0, 3.0}));
}

TEST(Registry, EveryNameBuilds)
{
  for (const auto& name : construction_names()) {
    const auto c = make_construction(name, {});
    EXPECT_TRUE(construction_violations(c).empty()) << name;
    EXPECT_NO_THROW(require_valid(c.set)) << name;
    EXPECT_EQ(prototype_set_from_json(to_json_string(c.set)).name, c.set.name);
  }
  EXPECT_THROW(make_construction("hexagon", {}), Error);
  EXPECT_EQ(n_from_two(4).set.name, "n_from_two(n=4, spacing=4)");
}
