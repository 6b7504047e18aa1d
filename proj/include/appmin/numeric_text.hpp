#pragma once

#include <string>

namespace appmin {

/// Shortest decimal text that parses back to exactly `value`
/// ("inf", "-inf" and "nan" for non-finite values).
std::string format_double(double value);

/// Inverse of format_double; throws appmin::Error on malformed text.
double parse_double(const std::string& text);

}  // namespace appmin
