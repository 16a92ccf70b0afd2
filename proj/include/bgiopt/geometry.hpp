#pragma once

#include "bgiopt/grid.hpp"

#include <span>
#include <vector>

namespace bgi {

using Ring = std::vector<Point>;

/// rings[0] is the exterior; further rings are holes. Rings are stored open
/// (the closing vertex of GeoJSON rings is dropped).
struct Polygon {
    std::vector<Ring> rings;
};

struct BoundingBox {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
};

/// Throws InputError if a ring has fewer than 3 distinct vertices or is self-intersecting.
void validate_polygon(const Polygon& poly);
bool ring_is_simple(const Ring& ring);

double signed_ring_area(const Ring& ring);
double polygon_area(const Polygon& poly);
BoundingBox bounding_box(const Polygon& poly);

/// Even-odd rule over all rings.
bool contains(const Polygon& poly, Point p);
double distance_to_boundary(const Polygon& poly, Point p);

/// Sorted indices of cells whose centre lies inside any of the polygons.
std::vector<std::size_t> rasterize_polygons(std::span<const Polygon> polygons, const Grid& grid);

} // namespace bgi
