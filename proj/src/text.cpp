#include "bgiopt/text.hpp"

#include "bgiopt/errors.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace bgi::text {

std::string_view trim(std::string_view s)
{
    const auto* ws = " \t\r\n";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(s.substr(start)));
            break;
        }
        out.push_back(trim(s.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> split_whitespace(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r' || s[i] == '\n')) {
            ++i;
        }
        const auto start = i;
        while (i < s.size() && !(s[i] == ' ' || s[i] == '\t' || s[i] == '\r' || s[i] == '\n')) {
            ++i;
        }
        if (i > start) {
            out.push_back(s.substr(start, i - start));
        }
    }
    return out;
}

std::vector<std::string_view> lines(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto pos = s.find('\n', start);
        auto row = s.substr(start, pos == std::string_view::npos ? s.size() - start : pos - start);
        if (!row.empty() && row.back() == '\r') {
            row.remove_suffix(1);
        }
        if (pos == std::string_view::npos) {
            if (start < s.size()) {
                out.push_back(row);
            }
            break;
        }
        out.push_back(row);
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view token, std::size_t line)
{
    token = trim(token);
    if (token.empty()) {
        throw ParseError("expected a number, found an empty field", line);
    }
    // strtod accepts hex floats and inf/nan spellings, which the cache relies on.
    const std::string buf(token);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size()) {
        throw ParseError("not a number: '" + buf + "'", line);
    }
    return v;
}

long long parse_int(std::string_view token, std::size_t line)
{
    token = trim(token);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError("not an integer: '" + std::string(token) + "'", line);
    }
    return v;
}

std::string format_double(double v)
{
    char buf[64];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) {
            break;
        }
    }
    return buf;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError("cannot write '" + path + "'");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

} // namespace bgi::text
