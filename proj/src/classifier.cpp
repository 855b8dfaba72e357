#include "slapknn/classifier.hpp"

#include <algorithm>
#include <thread>

namespace slapknn {

void check_query(const PrototypeSet& set, std::size_t k, std::span<const double> x)
{
  if (set.prototypes.empty()) throw Error("prototype set is empty");
  if (k < 1 || k > set.size())
    throw Error("k=" + std::to_string(k) + " out of range [1, " + std::to_string(set.size()) + "]");
  if (x.size() != set.dim)
    throw Error("query has dimension " + std::to_string(x.size()) + ", expected " +
                std::to_string(set.dim));
}

std::vector<std::size_t> neighbor_order(const PrototypeSet& set, std::span<const double> x)
{
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i)
    order.emplace_back(euclidean_distance(set.prototypes[i].position, x), i);
  std::sort(order.begin(), order.end());
  std::vector<std::size_t> out;
  out.reserve(order.size());
  for (const auto& [d, i] : order) out.push_back(i);
  return out;
}

Scorer::Scorer(const PrototypeSet& set, std::size_t k) : set_(&set), k_(k)
{
  if (set.prototypes.empty()) throw Error("prototype set is empty");
  if (k < 1 || k > set.size())
    throw Error("k=" + std::to_string(k) + " out of range [1, " + std::to_string(set.size()) + "]");
  order_.resize(set.size());
}

std::size_t Scorer::scores(std::span<const double> x, std::span<double> out)
{
  const auto& protos = set_->prototypes;
  for (std::size_t i = 0; i < protos.size(); ++i)
    order_[i] = {euclidean_distance(protos[i].position, x), i};

  // Lexicographic (distance, index) keeps ties at the k-th rank stable.
  std::partial_sort(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(k_),
                    order_.end());

  std::fill(out.begin(), out.end(), 0.0);
  if (order_.front().first < kExactHitDistance) {
    const auto& label = protos[order_.front().second].label.values;
    std::copy(label.begin(), label.end(), out.begin());
    return order_.front().second;
  }
  for (std::size_t r = 0; r < k_; ++r) {
    const auto& [dist, idx] = order_[r];
    const auto& label = protos[idx].label.values;
    const double w = 1.0 / dist;
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += label[c] * w;
  }
  return npos;
}

namespace {

double top_gap(std::span<const double> scores, std::size_t top)
{
  if (scores.size() < 2) return kConfidenceSentinel;
  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < scores.size(); ++c)
    if (c != top && scores[c] > second) second = scores[c];
  return scores[top] - second;
}

} // namespace

Classification Scorer::classify(std::span<const double> x)
{
  Classification out;
  out.scores.resize(set_->num_classes);
  const std::size_t hit = scores(x, out.scores);
  out.predicted = argmax_index(out.scores);
  if (hit != npos) {
    out.exact_hit = true;
    out.confidence = kConfidenceSentinel;
  } else {
    out.confidence = top_gap(out.scores, out.predicted);
  }
  return out;
}

std::vector<double> score_vector(const PrototypeSet& set, std::size_t k, std::span<const double> x)
{
  check_query(set, k, x);
  Scorer scorer(set, k);
  std::vector<double> out(set.num_classes);
  scorer.scores(x, out);
  return out;
}

Classification classify(const PrototypeSet& set, std::size_t k, std::span<const double> x)
{
  check_query(set, k, x);
  Scorer scorer(set, k);
  return scorer.classify(x);
}

std::vector<Classification> classify_batch(const PrototypeSet& set, std::size_t k,
                                           std::span<const Point> points, std::size_t partitions)
{
  std::vector<Classification> out(points.size());
  if (points.empty()) return out;
  for (const auto& p : points) check_query(set, k, p);

  if (partitions == 0) partitions = std::max(1u, std::thread::hardware_concurrency());
  partitions = std::min(partitions, points.size());

  auto work = [&](std::size_t begin, std::size_t end) {
    Scorer scorer(set, k);
    for (std::size_t i = begin; i < end; ++i) out[i] = scorer.classify(points[i]);
  };

  std::vector<std::jthread> workers;
  const std::size_t chunk = (points.size() + partitions - 1) / partitions;
  for (std::size_t begin = chunk; begin < points.size(); begin += chunk)
    workers.emplace_back(work, begin, std::min(begin + chunk, points.size()));
  work(0, std::min(chunk, points.size()));
  return out;
}

} // namespace slapknn
