#pragma once

#include <string>

namespace lazy_newton {

/// Shortest round-trip decimal form (at most 17 significant digits),
/// locale independent. Non-finite values print as nan, inf, -inf.
std::string format_number(double value);

}  // namespace lazy_newton
