#include "bgiopt/grid.hpp"

#include "bgiopt/errors.hpp"
#include "bgiopt/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <sstream>

namespace bgi {

void Grid::validate() const
{
    if (ncols < 1 || nrows < 1) {
        throw InputError("grid must have at least one row and one column");
    }
    if (!(cellsize > 0.0) || !std::isfinite(cellsize)) {
        throw InputError("grid cellsize must be positive");
    }
}

bool Raster::has_missing() const
{
    return std::find(missing.begin(), missing.end(), true) != missing.end();
}

namespace {

bool iequals(std::string_view a, std::string_view b)
{
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

} // namespace

Raster parse_ascii_grid(std::string_view content)
{
    static constexpr std::array<std::string_view, 6> keys = {"ncols",     "nrows",    "xllcorner",
                                                             "yllcorner", "cellsize", "NODATA_value"};
    const auto rows = text::lines(content);
    std::array<double, 6> header{};
    std::size_t line = 0;
    for (std::size_t k = 0; k < keys.size(); ++k) {
        while (line < rows.size() && text::trim(rows[line]).empty()) {
            ++line;
        }
        if (line >= rows.size()) {
            throw ParseError("missing header key '" + std::string(keys[k]) + "'", line + 1);
        }
        const auto tokens = text::split_whitespace(rows[line]);
        if (tokens.size() != 2 || !iequals(tokens[0], keys[k])) {
            throw ParseError("expected header key '" + std::string(keys[k]) + "'", line + 1);
        }
        header[k] = text::parse_double(tokens[1], line + 1);
        ++line;
    }

    Raster r;
    r.grid.ncols = static_cast<int>(header[0]);
    r.grid.nrows = static_cast<int>(header[1]);
    if (header[0] != r.grid.ncols || header[1] != r.grid.nrows) {
        throw ParseError("ncols and nrows must be integers", 1);
    }
    r.grid.xll = header[2];
    r.grid.yll = header[3];
    r.grid.cellsize = header[4];
    r.grid.nodata = header[5];
    r.grid.validate();

    const std::size_t expected = r.grid.cell_count();
    r.values.reserve(expected);
    r.missing.reserve(expected);
    for (; line < rows.size(); ++line) {
        for (const auto token : text::split_whitespace(rows[line])) {
            if (r.values.size() == expected) {
                throw ParseError("more than ncols*nrows values", line + 1);
            }
            const double v = text::parse_double(token, line + 1);
            r.values.push_back(v);
            r.missing.push_back(v == r.grid.nodata);
        }
    }
    if (r.values.size() != expected) {
        throw ParseError("expected " + std::to_string(expected) + " values, found " + std::to_string(r.values.size()),
                         rows.size());
    }
    return r;
}

std::string write_ascii_grid(const Grid& grid, const std::vector<double>& values)
{
    grid.validate();
    if (values.size() != grid.cell_count()) {
        throw InputError("value count does not match grid dimensions");
    }
    std::ostringstream out;
    out << "ncols " << grid.ncols << '\n'
        << "nrows " << grid.nrows << '\n'
        << "xllcorner " << text::format_double(grid.xll) << '\n'
        << "yllcorner " << text::format_double(grid.yll) << '\n'
        << "cellsize " << text::format_double(grid.cellsize) << '\n'
        << "NODATA_value " << text::format_double(grid.nodata) << '\n';
    for (int row = 0; row < grid.nrows; ++row) {
        for (int col = 0; col < grid.ncols; ++col) {
            if (col > 0) {
                out << ' ';
            }
            out << text::format_double(values[grid.index(row, col)]);
        }
        out << '\n';
    }
    return out.str();
}

} // namespace bgi
