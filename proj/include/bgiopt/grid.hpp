#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace bgi {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Raster geometry. Row 0 is the northernmost row; cells are stored row-major.
struct Grid {
    int ncols = 0;
    int nrows = 0;
    double xll = 0.0;
    double yll = 0.0;
    double cellsize = 1.0;
    double nodata = -9999.0;

    std::size_t cell_count() const { return static_cast<std::size_t>(ncols) * static_cast<std::size_t>(nrows); }
    std::size_t index(int row, int col) const
    {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(ncols) + static_cast<std::size_t>(col);
    }
    int row_of(std::size_t idx) const { return static_cast<int>(idx / static_cast<std::size_t>(ncols)); }
    int col_of(std::size_t idx) const { return static_cast<int>(idx % static_cast<std::size_t>(ncols)); }
    Point centre(int row, int col) const
    {
        return {xll + (col + 0.5) * cellsize, yll + (nrows - row - 0.5) * cellsize};
    }
    Point centre(std::size_t idx) const { return centre(row_of(idx), col_of(idx)); }
    double cell_area() const { return cellsize * cellsize; }

    void validate() const;
    bool operator==(const Grid&) const = default;
};

struct Raster {
    Grid grid;
    std::vector<double> values;
    std::vector<bool> missing;

    bool has_missing() const;
};

/// Esri ASCII grid. Header keys ncols, nrows, xllcorner, yllcorner, cellsize,
/// NODATA_value must appear in this order (key case is ignored).
Raster parse_ascii_grid(std::string_view content);
std::string write_ascii_grid(const Grid& grid, const std::vector<double>& values);

} // namespace bgi
