#pragma once

#include "bgiopt/catchment.hpp"
#include "bgiopt/flood.hpp"
#include "bgiopt/grid.hpp"
#include "bgiopt/risk.hpp"
#include "bgiopt/storm.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace testing_util {

inline bgi::Raster make_raster(int ncols, int nrows, double cellsize, const std::function<double(int, int)>& z)
{
    bgi::Raster r;
    r.grid = {ncols, nrows, 0.0, 0.0, cellsize, -9999.0};
    r.values.resize(r.grid.cell_count());
    r.missing.assign(r.grid.cell_count(), false);
    for (int row = 0; row < nrows; ++row) {
        for (int col = 0; col < ncols; ++col) {
            r.values[r.grid.index(row, col)] = z(row, col);
        }
    }
    return r;
}

inline bgi::Polygon rect(double x0, double y0, double x1, double y1)
{
    return bgi::Polygon{{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}}};
}

inline bgi::Building building(std::string id, bgi::BuildingCategory cat, bgi::Polygon footprint)
{
    bgi::Building b;
    b.id = std::move(id);
    b.category = cat;
    b.area = bgi::polygon_area(footprint);
    b.footprint = std::move(footprint);
    return b;
}

inline bgi::ZoneShape zone(int index, bgi::Polygon p) { return bgi::ZoneShape{index, {std::move(p)}}; }

/// Constant intensity for `duration_s`, split into `steps` equal steps.
inline bgi::DesignStorm uniform_storm(double intensity_mm_per_hr, double duration_s, int steps)
{
    bgi::DesignStorm s;
    s.return_period = 2.0;
    s.duration_min = duration_s / 60.0;
    s.total_depth_mm = intensity_mm_per_hr * duration_s / 3600.0;
    for (int i = 0; i < steps; ++i) {
        s.steps.push_back({duration_s / steps, intensity_mm_per_hr});
    }
    return s;
}

inline bgi::FloodParams quiet_params()
{
    bgi::FloodParams p;
    p.infil_green = 0.0;
    p.infil_permeable_active = 0.0;
    p.infil_impervious = 0.0;
    p.settle_time = 0.0;
    return p;
}

inline bgi::DamageCurve curve(bgi::BuildingCategory cat, std::vector<double> depth, std::vector<double> damage)
{
    bgi::DamageCurve c;
    c.category = cat;
    c.depth = std::move(depth);
    c.damage = std::move(damage);
    return c;
}

inline bgi::DamageCurves fixture_curves()
{
    using bgi::BuildingCategory;
    return {curve(BuildingCategory::residential, {0, 0.1, 0.3, 0.6, 1.0, 2.0}, {0, 5000, 18000, 28000, 35000, 45000}),
            curve(BuildingCategory::non_residential, {0, 0.1, 0.3, 0.6, 1.0, 2.0}, {0, 40, 120, 200, 260, 330})};
}

inline std::filesystem::path fresh_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("bgiopt_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// Priority-flood fill of a closed DEM from its lowest cell:
// cells join the lake in order of their spill elevation, and the level rises
// until the lake holds `volume`. Returns per-cell ponded depth.
inline std::vector<double> level_fill(const bgi::Grid& grid, const std::vector<double>& z, double volume)
{
    const std::size_t n = grid.cell_count();
    const auto start = static_cast<std::size_t>(std::min_element(z.begin(), z.end()) - z.begin());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> order;
    std::vector<double> spill;
    open.push({z[start], start});
    seen[start] = 1;
    while (!open.empty()) {
        const auto [e, cell] = open.top();
        open.pop();
        order.push_back(cell);
        spill.push_back(e);
        const int r = grid.row_of(cell);
        const int c = grid.col_of(cell);
        const int dr[4] = {-1, 1, 0, 0};
        const int dc[4] = {0, 0, -1, 1};
        for (int k = 0; k < 4; ++k) {
            const int rr = r + dr[k];
            const int cc = c + dc[k];
            if (rr < 0 || rr >= grid.nrows || cc < 0 || cc >= grid.ncols) {
                continue;
            }
            const std::size_t o = grid.index(rr, cc);
            if (!seen[o]) {
                seen[o] = 1;
                open.push({std::max(e, z[o]), o});
            }
        }
    }
    const double area = grid.cell_area();
    double bed_sum = 0.0;
    double level = spill[0];
    for (std::size_t k = 0; k < order.size(); ++k) {
        bed_sum += z[order[k]];
        const double cap_level = k + 1 < order.size() ? spill[k + 1] : std::numeric_limits<double>::infinity();
        const double candidate = (volume / area + bed_sum) / static_cast<double>(k + 1);
        if (candidate <= cap_level) {
            level = candidate;
            break;
        }
    }
    std::vector<double> depth(n, 0.0);
    for (std::size_t k = 0; k < order.size() && spill[k] < level; ++k) {
        depth[order[k]] = level - z[order[k]];
    }
    return depth;
}

} // namespace testing_util
