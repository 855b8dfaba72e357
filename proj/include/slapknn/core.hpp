#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace slapknn {

using Point = std::vector<double>;

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class LabelKind
{
  hard,
  probabilistic,
  unrestricted
};

const char* to_string(LabelKind kind);
LabelKind label_kind_from_string(const std::string& name);

/// Absolute tolerance on the sum of a probabilistic label.
inline constexpr double kProbabilitySumTolerance = 1e-9;

/// Per-class weights of a single prototype. Class indices are 0-based.
struct SoftLabel
{
  std::vector<double> values;
  LabelKind kind = LabelKind::unrestricted;

  std::size_t size() const { return values.size(); }

  static SoftLabel hard(std::size_t num_classes, std::size_t cls);
  static SoftLabel probabilistic(std::vector<double> values);
  static SoftLabel unrestricted(std::vector<double> values);
};

/// Empty when the label satisfies its kind invariant, otherwise one message per violation.
std::vector<std::string> label_violations(const SoftLabel& label);

struct Prototype
{
  Point position;
  SoftLabel label;
};

struct PrototypeSet
{
  std::vector<Prototype> prototypes;
  std::size_t num_classes = 0;
  std::size_t dim = 0;
  std::string name;

  std::size_t size() const { return prototypes.size(); }
};

struct ValidationIssue
{
  /// Offending prototype, or npos for set-level problems.
  std::size_t index;
  std::string message;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

std::vector<ValidationIssue> validate(const PrototypeSet& set);

/// Throws Error listing every issue if the set is invalid.
void require_valid(const PrototypeSet& set);

SoftLabel label_softmax(const SoftLabel& label);
SoftLabel label_argmax(const SoftLabel& label);

/// Index of the largest element; ties go to the lowest index.
std::size_t argmax_index(std::span<const double> values);

std::vector<double> class_weight_sum(const PrototypeSet& set);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

} // namespace slapknn
