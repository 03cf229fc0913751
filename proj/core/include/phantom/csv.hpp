#pragma once

#include <optional>
#include <string>

namespace phantom {

/// Formats a floating-point value with 9 significant digits, the precision used
/// by every CSV and report this project writes.
std::string format_double(double value);

/// Empty string for std::nullopt.
std::string format_optional(const std::optional<int>& value);

}  // namespace phantom
