#pragma once

#include <string>
#include <string_view>

namespace imcons {

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_double(double v);

/// Parses the output of format_double (also "inf", "-inf", "nan").
/// Throws Error(kConfig) on malformed input.
double parse_double(std::string_view s);

}  // namespace imcons
