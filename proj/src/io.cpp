#include "troppca/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "troppca/error.hpp"

namespace troppca {

std::string format_double(double x) {
    if (x == 0.0) return "0";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

std::string format_double(double x, int significant_digits) {
    if (x == 0.0) return "0";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general,
                                   significant_digits);
    return std::string(buf, ptr);
}

double parse_double(std::string_view text, std::size_t offset) {
    std::string_view body = text;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    double value = 0.0;
    const char* first = body.data();
    const char* last = body.data() + body.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (body.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw ParseError("malformed number '" + std::string(text) + "' at offset " +
                             std::to_string(offset),
                         offset);
    }
    return value;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InvalidInput("failed writing '" + path + "'");
}

}  // namespace troppca
