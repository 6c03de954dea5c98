#include "format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace spherequad::cli {

namespace {

std::string to_chars_string(double x, std::chars_format fmt, int precision) {
    if (std::isnan(x))
        return "nan";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, fmt, precision);
    return {buf.data(), res.ptr};
}

} // namespace

std::string sci6(double x) { return to_chars_string(x, std::chars_format::scientific, 5); }

std::string fixed4(double x) { return to_chars_string(x, std::chars_format::fixed, 4); }

std::string full(double x) { return to_chars_string(x, std::chars_format::general, 17); }

std::string csv_row(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (k)
            line += ',';
        line += fields[k];
    }
    line += '\n';
    return line;
}

} // namespace spherequad::cli
