#include "lazy_newton/number_format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace lazy_newton {

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    std::array<char, 32> buf{};
    const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return {buf.data(), result.ptr};
}

}  // namespace lazy_newton
