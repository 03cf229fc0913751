#include "phantom/csv.hpp"

#include <cmath>
#include <cstdio>

namespace phantom {

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value == 0.0 ? 0.0 : value);
  return buf;
}

std::string format_optional(const std::optional<int>& value) {
  return value ? std::to_string(*value) : std::string{};
}

}  // namespace phantom
