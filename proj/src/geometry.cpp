#include "bgiopt/geometry.hpp"

#include "bgiopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bgi {

namespace {

double cross(Point o, Point a, Point b)
{
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(Point a, Point b, Point p)
{
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point a, Point b, Point c, Point d)
{
    const double d1 = cross(c, d, a);
    const double d2 = cross(c, d, b);
    const double d3 = cross(a, b, c);
    const double d4 = cross(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    return (d1 == 0 && on_segment(c, d, a)) || (d2 == 0 && on_segment(c, d, b)) ||
           (d3 == 0 && on_segment(a, b, c)) || (d4 == 0 && on_segment(a, b, d));
}

double point_segment_distance(Point p, Point a, Point b)
{
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) {
        t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    }
    return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

} // namespace

bool ring_is_simple(const Ring& ring)
{
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = ring[i];
        const Point b = ring[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            // Adjacent edges share a vertex by construction.
            if (j == i + 1 || (i == 0 && j == n - 1)) {
                continue;
            }
            if (segments_intersect(a, b, ring[j], ring[(j + 1) % n])) {
                return false;
            }
        }
    }
    return true;
}

void validate_polygon(const Polygon& poly)
{
    if (poly.rings.empty()) {
        throw InputError("polygon has no rings");
    }
    for (const auto& ring : poly.rings) {
        std::size_t distinct = 0;
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const Point a = ring[i];
            const Point b = ring[(i + 1) % ring.size()];
            if (a.x != b.x || a.y != b.y) {
                ++distinct;
            }
        }
        if (distinct < 3) {
            throw InputError("degenerate polygon ring: fewer than 3 distinct vertices");
        }
        if (signed_ring_area(ring) == 0.0) {
            throw InputError("degenerate polygon ring: zero area");
        }
        if (!ring_is_simple(ring)) {
            throw InputError("polygon ring is self-intersecting");
        }
    }
}

double signed_ring_area(const Ring& ring)
{
    double twice = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = ring[i];
        const Point b = ring[(i + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    return 0.5 * twice;
}

double polygon_area(const Polygon& poly)
{
    if (poly.rings.empty()) {
        return 0.0;
    }
    double area = std::abs(signed_ring_area(poly.rings[0]));
    for (std::size_t i = 1; i < poly.rings.size(); ++i) {
        area -= std::abs(signed_ring_area(poly.rings[i]));
    }
    return area;
}

BoundingBox bounding_box(const Polygon& poly)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    BoundingBox box{inf, inf, -inf, -inf};
    for (const auto& ring : poly.rings) {
        for (const auto& p : ring) {
            box.xmin = std::min(box.xmin, p.x);
            box.ymin = std::min(box.ymin, p.y);
            box.xmax = std::max(box.xmax, p.x);
            box.ymax = std::max(box.ymax, p.y);
        }
    }
    return box;
}

bool contains(const Polygon& poly, Point p)
{
    bool inside = false;
    for (const auto& ring : poly.rings) {
        const std::size_t n = ring.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Point a = ring[i];
            const Point b = ring[j];
            if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) {
                inside = !inside;
            }
        }
    }
    return inside;
}

double distance_to_boundary(const Polygon& poly, Point p)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ring : poly.rings) {
        const std::size_t n = ring.size();
        for (std::size_t i = 0; i < n; ++i) {
            best = std::min(best, point_segment_distance(p, ring[i], ring[(i + 1) % n]));
        }
    }
    return best;
}

std::vector<std::size_t> rasterize_polygons(std::span<const Polygon> polygons, const Grid& grid)
{
    std::vector<std::size_t> cells;
    for (const auto& poly : polygons) {
        validate_polygon(poly);
        const auto box = bounding_box(poly);
        // Candidate columns/rows whose centres can fall within the box.
        const int c0 = std::max(0, static_cast<int>(std::floor((box.xmin - grid.xll) / grid.cellsize - 0.5)));
        const int c1 = std::min(grid.ncols - 1, static_cast<int>(std::ceil((box.xmax - grid.xll) / grid.cellsize - 0.5)));
        const double ytop = grid.yll + grid.nrows * grid.cellsize;
        const int r0 = std::max(0, static_cast<int>(std::floor((ytop - box.ymax) / grid.cellsize - 0.5)));
        const int r1 = std::min(grid.nrows - 1, static_cast<int>(std::ceil((ytop - box.ymin) / grid.cellsize - 0.5)));
        for (int row = r0; row <= r1; ++row) {
            for (int col = c0; col <= c1; ++col) {
                if (contains(poly, grid.centre(row, col))) {
                    cells.push_back(grid.index(row, col));
                }
            }
        }
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    return cells;
}

} // namespace bgi
