// Locale-independent number formatting for CSV and OBJ output.
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace spherequad::cli {

/// Scientific notation with 6 significant digits, e.g. 8.23305e-02.
std::string sci6(double x);
/// Fixed notation with 4 decimals.
std::string fixed4(double x);
/// Shortest form that round-trips 17 significant digits.
std::string full(double x);

std::string csv_row(const std::vector<std::string>& fields);

} // namespace spherequad::cli
