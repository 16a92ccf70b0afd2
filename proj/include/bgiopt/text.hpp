#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bgi::text {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string_view> split_whitespace(std::string_view s);
std::vector<std::string_view> lines(std::string_view s);

// Strict full-token conversion; throws ParseError citing `line`.
double parse_double(std::string_view token, std::size_t line);
long long parse_int(std::string_view token, std::size_t line);

// Shortest form that round-trips through strtod.
std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

} // namespace bgi::text
