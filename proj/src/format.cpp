#include "slapknn/format.hpp"

#include <charconv>
#include <cmath>

namespace slapknn {

std::string format_number(double value)
{
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

} // namespace slapknn
