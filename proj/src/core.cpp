#include "slapknn/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace slapknn {

const char* to_string(LabelKind kind)
{
  switch (kind) {
  case LabelKind::hard: return "hard";
  case LabelKind::probabilistic: return "probabilistic";
  case LabelKind::unrestricted: return "unrestricted";
  }
  return "unrestricted";
}

LabelKind label_kind_from_string(const std::string& name)
{
  if (name == "hard") return LabelKind::hard;
  if (name == "probabilistic") return LabelKind::probabilistic;
  if (name == "unrestricted") return LabelKind::unrestricted;
  throw Error("unknown label kind '" + name + "'");
}

namespace {

void throw_if_invalid(const SoftLabel& label)
{
  auto problems = label_violations(label);
  if (problems.empty()) return;
  std::string msg = std::string("invalid ") + to_string(label.kind) + " label:";
  for (const auto& p : problems) msg += " " + p + ";";
  throw Error(msg);
}

} // namespace

SoftLabel SoftLabel::hard(std::size_t num_classes, std::size_t cls)
{
  if (cls >= num_classes) throw Error("hard label class index out of range");
  SoftLabel label{std::vector<double>(num_classes, 0.0), LabelKind::hard};
  label.values[cls] = 1.0;
  return label;
}

SoftLabel SoftLabel::probabilistic(std::vector<double> values)
{
  SoftLabel label{std::move(values), LabelKind::probabilistic};
  throw_if_invalid(label);
  return label;
}

SoftLabel SoftLabel::unrestricted(std::vector<double> values)
{
  SoftLabel label{std::move(values), LabelKind::unrestricted};
  throw_if_invalid(label);
  return label;
}

std::vector<std::string> label_violations(const SoftLabel& label)
{
  std::vector<std::string> out;
  if (label.values.empty()) {
    out.emplace_back("empty label");
    return out;
  }
  if (std::any_of(label.values.begin(), label.values.end(),
                  [](double v) { return !std::isfinite(v); })) {
    out.emplace_back("non-finite element");
    return out;
  }
  switch (label.kind) {
  case LabelKind::hard: {
    std::size_t ones = 0;
    bool other = false;
    for (double v : label.values) {
      if (v == 1.0) ++ones;
      else if (v != 0.0) other = true;
    }
    if (ones != 1 || other) out.emplace_back("hard label is not a unit vector");
    break;
  }
  case LabelKind::probabilistic: {
    if (std::any_of(label.values.begin(), label.values.end(), [](double v) { return v < 0.0; }))
      out.emplace_back("negative element");
    double sum = std::accumulate(label.values.begin(), label.values.end(), 0.0);
    if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
      std::ostringstream os;
      os << "elements sum to " << sum << ", not 1";
      out.push_back(os.str());
    }
    break;
  }
  case LabelKind::unrestricted: break;
  }
  return out;
}

std::vector<ValidationIssue> validate(const PrototypeSet& set)
{
  std::vector<ValidationIssue> issues;
  constexpr auto npos = ValidationIssue::npos;
  if (set.num_classes == 0) issues.push_back({npos, "num_classes must be positive"});
  if (set.dim == 0) issues.push_back({npos, "dim must be positive"});
  if (set.prototypes.empty()) issues.push_back({npos, "set has no prototypes"});

  for (std::size_t i = 0; i < set.prototypes.size(); ++i) {
    const auto& p = set.prototypes[i];
    if (p.position.size() != set.dim)
      issues.push_back({i, "position has dimension " + std::to_string(p.position.size()) +
                               ", expected " + std::to_string(set.dim)});
    if (std::any_of(p.position.begin(), p.position.end(),
                    [](double v) { return !std::isfinite(v); }))
      issues.push_back({i, "non-finite position"});
    if (p.label.size() != set.num_classes)
      issues.push_back({i, "label has length " + std::to_string(p.label.size()) +
                               ", expected " + std::to_string(set.num_classes)});
    for (auto& msg : label_violations(p.label)) issues.push_back({i, std::move(msg)});
  }

  for (std::size_t i = 0; i < set.prototypes.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (set.prototypes[i].position == set.prototypes[j].position)
        issues.push_back({i, "duplicate position (same as prototype " + std::to_string(j) + ")"});

  return issues;
}

void require_valid(const PrototypeSet& set)
{
  auto issues = validate(set);
  if (issues.empty()) return;
  std::string msg = "invalid prototype set '" + set.name + "':";
  for (const auto& issue : issues) {
    msg += "\n  ";
    if (issue.index != ValidationIssue::npos) msg += "[" + std::to_string(issue.index) + "] ";
    msg += issue.message;
  }
  throw Error(msg);
}

SoftLabel label_softmax(const SoftLabel& label)
{
  if (label.kind != LabelKind::unrestricted)
    throw Error("softmax expects an unrestricted label");
  if (label.values.empty()) throw Error("softmax of an empty label");
  const double peak = *std::max_element(label.values.begin(), label.values.end());
  std::vector<double> out(label.values.size());
  double total = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::exp(label.values[i] - peak);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return SoftLabel{std::move(out), LabelKind::probabilistic};
}

std::size_t argmax_index(std::span<const double> values)
{
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

SoftLabel label_argmax(const SoftLabel& label)
{
  if (label.values.empty()) throw Error("argmax of an empty label");
  return SoftLabel::hard(label.size(), argmax_index(label.values));
}

std::vector<double> class_weight_sum(const PrototypeSet& set)
{
  std::vector<double> sum(set.num_classes, 0.0);
  for (const auto& p : set.prototypes) {
    if (p.label.size() != set.num_classes) throw Error("label length does not match num_classes");
    for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += p.label.values[c];
  }
  return sum;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b)
{
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

} // namespace slapknn
