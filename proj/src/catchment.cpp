#include "bgiopt/catchment.hpp"

#include "bgiopt/errors.hpp"
#include "bgiopt/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>

namespace bgi {

using nlohmann::json;

std::string_view to_string(BuildingCategory c)
{
    return c == BuildingCategory::residential ? "residential" : "non_residential";
}

BuildingCategory parse_building_category(std::string_view s)
{
    if (s == "residential") {
        return BuildingCategory::residential;
    }
    if (s == "non_residential") {
        return BuildingCategory::non_residential;
    }
    throw InputError("unknown building category '" + std::string(s) + "'");
}

std::size_t Catchment::count(LandClass c) const
{
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), c));
}

namespace {

Ring parse_ring(const json& coords)
{
    if (!coords.is_array()) {
        throw InputError("GeoJSON ring is not an array");
    }
    Ring ring;
    for (const auto& pos : coords) {
        if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
            throw InputError("GeoJSON position must hold two numbers");
        }
        ring.push_back({pos[0].get<double>(), pos[1].get<double>()});
    }
    if (ring.size() >= 2 && ring.front().x == ring.back().x && ring.front().y == ring.back().y) {
        ring.pop_back();
    }
    return ring;
}

Polygon parse_polygon_coords(const json& coords)
{
    if (!coords.is_array() || coords.empty()) {
        throw InputError("GeoJSON polygon has no rings");
    }
    Polygon poly;
    for (const auto& ring : coords) {
        poly.rings.push_back(parse_ring(ring));
    }
    validate_polygon(poly);
    return poly;
}

std::vector<Polygon> parse_geometry(const json& geometry)
{
    if (!geometry.is_object() || !geometry.contains("type") || !geometry.contains("coordinates")) {
        throw InputError("feature geometry must have 'type' and 'coordinates'");
    }
    const auto type = geometry.at("type").get<std::string>();
    const auto& coords = geometry.at("coordinates");
    if (type == "Polygon") {
        return {parse_polygon_coords(coords)};
    }
    if (type == "MultiPolygon") {
        std::vector<Polygon> out;
        for (const auto& p : coords) {
            out.push_back(parse_polygon_coords(p));
        }
        return out;
    }
    throw InputError("unsupported geometry type '" + type + "'");
}

const json& features_of(const json& doc)
{
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features") ||
        !doc.at("features").is_array()) {
        throw InputError("expected a GeoJSON FeatureCollection");
    }
    return doc.at("features");
}

json parse_json(std::string_view content)
{
    try {
        return json::parse(content);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("invalid GeoJSON: ") + e.what());
    }
}

template <typename Fn>
void for_each_feature(std::string_view content, Fn&& fn)
{
    const json doc = parse_json(content);
    std::size_t n = 0;
    for (const auto& feature : features_of(doc)) {
        try {
            fn(feature);
        } catch (const json::exception& e) {
            throw InputError("feature " + std::to_string(n) + ": " + e.what());
        } catch (const InputError& e) {
            throw InputError("feature " + std::to_string(n) + ": " + e.what());
        }
        ++n;
    }
}

} // namespace

std::vector<Building> parse_buildings_geojson(std::string_view content)
{
    std::vector<Building> out;
    for_each_feature(content, [&](const json& feature) {
        const auto& props = feature.at("properties");
        Building b;
        b.id = props.at("id").get<std::string>();
        b.category = parse_building_category(props.at("category").get<std::string>());
        auto polys = parse_geometry(feature.at("geometry"));
        if (polys.size() != 1) {
            throw InputError("building '" + b.id + "' must be a single polygon");
        }
        b.footprint = std::move(polys.front());
        b.area = polygon_area(b.footprint);
        if (!(b.area > 0.0)) {
            throw InputError("building '" + b.id + "' has non-positive area");
        }
        out.push_back(std::move(b));
    });
    return out;
}

std::vector<ZoneShape> parse_zones_geojson(std::string_view content)
{
    std::vector<ZoneShape> out;
    for_each_feature(content, [&](const json& feature) {
        ZoneShape z;
        const auto& idx = feature.at("properties").at("index");
        if (!idx.is_number_integer() || idx.get<long long>() < 1) {
            throw InputError("zone 'index' must be an integer >= 1");
        }
        z.index = idx.get<int>();
        z.polygons = parse_geometry(feature.at("geometry"));
        out.push_back(std::move(z));
    });
    return out;
}

std::vector<Polygon> parse_polygons_geojson(std::string_view content)
{
    std::vector<Polygon> out;
    for_each_feature(content, [&](const json& feature) {
        for (auto& p : parse_geometry(feature.at("geometry"))) {
            out.push_back(std::move(p));
        }
    });
    return out;
}

Catchment assemble_catchment(const Raster& dem, const std::vector<Polygon>& green,
                             std::vector<Building> buildings, std::vector<ZoneShape> zones)
{
    dem.grid.validate();
    if (dem.has_missing()) {
        throw InputError("DEM contains NODATA cells; the flood domain must be fully defined");
    }
    Catchment c;
    c.grid = dem.grid;
    c.elevation = dem.values;
    c.mask.assign(c.grid.cell_count(), LandClass::impervious);

    for (const auto cell : rasterize_polygons(green, c.grid)) {
        c.mask[cell] = LandClass::green;
    }
    {
        std::map<std::string, int> seen;
        for (const auto& b : buildings) {
            if (seen[b.id]++ > 0) {
                throw InputError("duplicate building id '" + b.id + "'");
            }
            for (const auto cell : rasterize_polygons(std::span(&b.footprint, 1), c.grid)) {
                c.mask[cell] = LandClass::building;
            }
        }
    }
    c.buildings = std::move(buildings);

    std::sort(zones.begin(), zones.end(), [](const ZoneShape& a, const ZoneShape& b) { return a.index < b.index; });
    for (std::size_t i = 0; i < zones.size(); ++i) {
        if (zones[i].index != static_cast<int>(i) + 1) {
            throw InputError("zone indices must be unique and contiguous from 1; index " +
                             std::to_string(i + 1) + " is missing or duplicated");
        }
    }

    std::vector<int> owner(c.grid.cell_count(), 0);
    for (auto& shape : zones) {
        Zone z;
        z.index = shape.index;
        std::size_t dropped_building = 0;
        std::size_t dropped_overlap = 0;
        for (const auto cell : rasterize_polygons(shape.polygons, c.grid)) {
            if (c.mask[cell] == LandClass::building) {
                ++dropped_building;
            } else if (owner[cell] != 0) {
                ++dropped_overlap;
            } else {
                owner[cell] = z.index;
                z.cells.push_back(cell);
            }
        }
        if (dropped_building > 0) {
            c.warnings.push_back("zone " + std::to_string(z.index) + ": " + std::to_string(dropped_building) +
                                 " cell(s) under buildings removed");
        }
        if (dropped_overlap > 0) {
            c.warnings.push_back("zone " + std::to_string(z.index) + ": " + std::to_string(dropped_overlap) +
                                 " cell(s) already claimed by a lower-indexed zone removed");
        }
        if (z.cells.empty()) {
            throw InputError("zone " + std::to_string(z.index) + " covers no usable cell centres");
        }
        z.area = static_cast<double>(z.cells.size()) * c.grid.cell_area();
        z.polygons = std::move(shape.polygons);
        c.zones.push_back(std::move(z));
    }
    return c;
}

Catchment load_catchment(const CatchmentPaths& paths)
{
    const auto dem = parse_ascii_grid(text::read_file(paths.dem));
    std::vector<Polygon> green;
    if (!paths.landuse.empty()) {
        green = parse_polygons_geojson(text::read_file(paths.landuse));
    }
    auto buildings = parse_buildings_geojson(text::read_file(paths.buildings));
    auto zones = parse_zones_geojson(text::read_file(paths.zones));
    return assemble_catchment(dem, green, std::move(buildings), std::move(zones));
}

} // namespace bgi
