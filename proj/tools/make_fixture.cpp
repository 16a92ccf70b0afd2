// Writes the bundled synthetic catchments.
//   make_fixture synthetic64 <dir>
//   make_fixture small12 <dir>

#include "bgiopt/grid.hpp"
#include "bgiopt/text.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Rect {
    double x0, y0, x1, y1;
};

json rect_coords(const Rect& r)
{
    return json::array({json::array({{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}, {r.x0, r.y0}})});
}

json feature(json props, json geometry)
{
    return {{"type", "Feature"}, {"properties", std::move(props)}, {"geometry", std::move(geometry)}};
}

json collection(json features) { return {{"type", "FeatureCollection"}, {"features", std::move(features)}}; }

void write_curves(const fs::path& dir)
{
    fs::create_directories(dir / "curves");
    bgi::text::write_file((dir / "curves/residential.csv").string(),
                          "depth_m,value\n0,0\n0.1,5000\n0.3,18000\n0.6,28000\n1.0,35000\n2.0,45000\n");
    bgi::text::write_file((dir / "curves/non_residential.csv").string(),
                          "depth_m,value\n0,0\n0.1,40\n0.3,120\n0.6,200\n1.0,260\n2.0,330\n");
}

void write_json(const fs::path& p, const json& doc) { bgi::text::write_file(p.string(), doc.dump(1) + "\n"); }

// Bowl of depth `rim` at the basin edge (Chebyshev radius `half`), lowest at the centre.
double bowl(double x, double y, double cx, double cy, double half, double rim)
{
    const double rx = (x - cx) / half;
    const double ry = (y - cy) / half;
    return rim * std::min(1.0, rx * rx + ry * ry);
}

void write_grid(const fs::path& dir, const bgi::Grid& grid, const std::vector<double>& dem)
{
    fs::create_directories(dir);
    bgi::text::write_file((dir / "dem.asc").string(), bgi::write_ascii_grid(grid, dem));
}

// Basins of side `basin`, each with four zones towards its corners and
// four buildings on the bowl flanks.
struct Layout {
    int nx;
    int ny;
    double basin;
    double cellsize;
    double zone_base;
    double zone_step;
    double building_offset;
};

void basins(const fs::path& dir, const Layout& l)
{
    const double basin = l.basin;
    bgi::Grid grid{static_cast<int>(l.nx * basin / l.cellsize), static_cast<int>(l.ny * basin / l.cellsize), 0.0, 0.0,
                   l.cellsize, -9999.0};
    std::vector<double> dem(grid.cell_count());
    auto rim_of = [](int i, int j) { return 0.7 + 0.1 * ((3 * i + j) % 5); };
    for (int r = 0; r < grid.nrows; ++r) {
        for (int c = 0; c < grid.ncols; ++c) {
            const auto p = grid.centre(r, c);
            const int i = std::min(l.nx - 1, static_cast<int>(p.x / basin));
            const int j = std::min(l.ny - 1, static_cast<int>(p.y / basin));
            const double cx = (i + 0.5) * basin;
            const double cy = (j + 0.5) * basin;
            const double z = 20.0 + 0.002 * p.y + bowl(p.x, p.y, cx, cy, 0.5 * basin, rim_of(i, j)) +
                             0.02 * std::sin(p.x / 17.0) * std::cos(p.y / 13.0);
            dem[grid.index(r, c)] = std::round(z * 1000.0) / 1000.0;
        }
    }
    write_grid(dir, grid, dem);

    json zones = json::array();
    json buildings = json::array();
    int zone_index = 1;
    for (int j = 0; j < l.ny; ++j) {
        for (int i = 0; i < l.nx; ++i) {
            const double bx = i * basin;
            const double by = j * basin;
            const double cx = bx + 0.5 * basin;
            const double cy = by + 0.5 * basin;
            for (int q = 0; q < 4; ++q) {
                const double w = l.zone_base + l.zone_step * ((i + 2 * j + q) % 3);
                const double x0 = (q % 2 == 0) ? bx + 0.04 * basin : bx + 0.96 * basin - w;
                const double y0 = (q / 2 == 0) ? by + 0.04 * basin : by + 0.96 * basin - w;
                zones.push_back(feature({{"index", zone_index++}},
                                        {{"type", "Polygon"}, {"coordinates", rect_coords({x0, y0, x0 + w, y0 + w})}}));
            }
            const double d = l.building_offset;
            const Rect sites[4] = {{cx - 6, cy + d - 5, cx + 6, cy + d + 5},
                                   {cx + d - 5, cy - 6, cx + d + 5, cy + 6},
                                   {cx - 6, cy - d - 5, cx + 6, cy - d + 5},
                                   {cx - d - 5, cy - 6, cx - d + 5, cy + 6}};
            for (int s = 0; s < 4; ++s) {
                const bool non_res = (i + j + s) % 4 == 0;
                Rect b = sites[s];
                if (non_res) {
                    b = {b.x0 - 2, b.y0 - 2, b.x1 + 2, b.y1 + 2};
                }
                const std::string id = "B" + std::to_string(j) + std::to_string(i) + "_" + std::to_string(s);
                buildings.push_back(
                    feature({{"id", id}, {"category", non_res ? "non_residential" : "residential"}},
                            {{"type", "Polygon"}, {"coordinates", rect_coords(b)}}));
            }
        }
    }
    write_json(dir / "zones.geojson", collection(zones));
    write_json(dir / "buildings.geojson", collection(buildings));
    const double extent = l.nx * basin;
    const json park = json::array({json::array({{0.42 * extent, 0.02 * extent},
                                                {0.58 * extent, 0.02 * extent},
                                                {0.58 * extent, 0.1 * extent},
                                                {0.42 * extent, 0.08 * extent},
                                                {0.42 * extent, 0.02 * extent}})});
    write_json(dir / "green.geojson",
               collection(json::array({feature(json::object(), {{"type", "Polygon"}, {"coordinates", park}})})));
    write_curves(dir);
}

} // namespace

int main(int argc, char** argv)
{
    if (argc != 3) {
        std::cerr << "usage: make_fixture synthetic64|small12 <dir>\n";
        return 1;
    }
    const std::string which = argv[1];
    if (which == "synthetic64") {
        basins(argv[2], {4, 4, 125.0, 5.0, 30.0, 7.5, 21.0});
    } else if (which == "small12") {
        basins(argv[2], {3, 1, 50.0, 5.0, 8.0, 3.0, 14.0});
    } else {
        std::cerr << "unknown fixture '" << which << "'\n";
        return 1;
    }
    return 0;
}
