#include "appmin/numeric_text.hpp"

#include <charconv>
#include <cmath>

#include "appmin/types.hpp"

namespace appmin {

std::string format_double(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc())
        throw Error("cannot format number");
    return std::string(buf, end);
}

double parse_double(const std::string& text)
{
    if (text == "inf" || text == "+inf")
        return HUGE_VAL;
    if (text == "-inf")
        return -HUGE_VAL;
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [end, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || end != last)
        throw Error("malformed number '" + text + "'");
    return value;
}

}  // namespace appmin
