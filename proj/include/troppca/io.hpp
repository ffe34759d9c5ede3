#pragma once

#include <string>
#include <string_view>

namespace troppca {

// Shortest decimal form that round-trips to the same double; "-0" printed as
// "0". Locale independent.
std::string format_double(double x);

// "%.{digits}g"-style formatting, locale independent.
std::string format_double(double x, int significant_digits);

// Full-string parse of a decimal number; throws ParseError with `offset`
// reported for errors.
double parse_double(std::string_view text, std::size_t offset = 0);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace troppca
