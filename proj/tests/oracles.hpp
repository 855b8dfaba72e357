#pragma once

// Test-only reference computations. Nothing here calls into the library's
// classification or geometry code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

struct Rational
{
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d = 1) : num(n), den(d) { normalize(); }

  void normalize()
  {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
  friend Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }
  friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }
};

using Vec = std::vector<double>;

inline double dist(const Vec& a, const Vec& b)
{
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// Plain distance-weighted soft-label kNN scores: full stable sort, direct sum.
inline Vec scores(const std::vector<Vec>& positions, const std::vector<Vec>& labels, std::size_t k,
                  const Vec& x)
{
  std::vector<std::size_t> idx(positions.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return dist(positions[a], x) < dist(positions[b], x); });
  Vec out(labels.front().size(), 0.0);
  for (std::size_t r = 0; r < k; ++r) {
    const double d = dist(positions[idx[r]], x);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += labels[idx[r]][c] / d;
  }
  return out;
}

inline std::size_t argmax(const Vec& v)
{
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

/// Class of the nearest prototype (hard labels).
inline std::size_t nearest_class(const std::vector<Vec>& positions, const std::vector<std::size_t>& classes,
                                 const Vec& x)
{
  std::size_t best = 0;
  for (std::size_t i = 1; i < positions.size(); ++i)
    if (dist(positions[i], x) < dist(positions[best], x)) best = i;
  return classes[best];
}

/// Root of f on [lo, hi] given a sign change, by plain bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iterations = 200)
{
  double flo = f(lo);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace oracle
