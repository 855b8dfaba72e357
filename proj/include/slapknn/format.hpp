#pragma once

#include <string>

namespace slapknn {

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

} // namespace slapknn
