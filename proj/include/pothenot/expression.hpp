#pragma once

#include <string_view>

namespace pothenot {

/// Evaluates a numeric literal such as "0.7", "√85/10", "sqrt(2)/2", "-7/10"
/// or "2*pi/3". Supports + - * / ^, parentheses, pi, sqrt and the √ sign.
/// Throws std::invalid_argument on malformed input.
double parse_number(std::string_view text);

}  // namespace pothenot
