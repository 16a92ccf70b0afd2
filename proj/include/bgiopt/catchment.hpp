#pragma once

#include "bgiopt/geometry.hpp"
#include "bgiopt/grid.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bgi {

enum class LandClass : std::uint8_t { impervious = 0, green = 1, building = 2 };

enum class BuildingCategory : std::uint8_t { residential, non_residential };

std::string_view to_string(BuildingCategory c);
BuildingCategory parse_building_category(std::string_view s);

struct Building {
    std::string id;
    BuildingCategory category = BuildingCategory::residential;
    Polygon footprint;
    double area = 0.0; // footprint area from geometry, m^2
};

struct ZoneShape {
    int index = 0; // 1-based
    std::vector<Polygon> polygons;
};

struct Zone {
    int index = 0;
    std::vector<Polygon> polygons;
    std::vector<std::size_t> cells; // sorted
    double area = 0.0;              // cells * cellsize^2
};

/// Immutable rasterised catchment. Zone i (0-based) in `zones` carries index i+1
/// and corresponds to genome bit i.
struct Catchment {
    Grid grid;
    std::vector<double> elevation;
    std::vector<LandClass> mask;
    std::vector<Building> buildings;
    std::vector<Zone> zones;
    std::vector<std::string> warnings;

    std::size_t count(LandClass c) const;
};

std::vector<Building> parse_buildings_geojson(std::string_view content);
std::vector<ZoneShape> parse_zones_geojson(std::string_view content);
std::vector<Polygon> parse_polygons_geojson(std::string_view content);

/// Mask precedence: building > green > impervious. Zone cells covered by a
/// building are dropped with a warning; a zone left empty is an error.
Catchment assemble_catchment(const Raster& dem, const std::vector<Polygon>& green,
                             std::vector<Building> buildings, std::vector<ZoneShape> zones);

struct CatchmentPaths {
    std::string dem;
    std::string landuse; // green-area polygons; may be empty
    std::string buildings;
    std::string zones;
};

Catchment load_catchment(const CatchmentPaths& paths);

} // namespace bgi
