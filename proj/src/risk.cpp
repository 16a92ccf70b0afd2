#include "bgiopt/risk.hpp"

#include "bgiopt/errors.hpp"
#include "bgiopt/text.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace bgi {

void DamageCurve::validate() const
{
    if (depth.size() != damage.size() || depth.size() < 2) {
        throw ConfigError("damage curve needs at least two points");
    }
    if (depth.front() != 0.0 || damage.front() != 0.0) {
        throw ConfigError("damage curve must start at (0, 0)");
    }
    for (std::size_t i = 1; i < depth.size(); ++i) {
        if (!(depth[i] > depth[i - 1])) {
            throw ConfigError("damage curve depths must be strictly increasing");
        }
        if (!(damage[i] >= damage[i - 1]) || !std::isfinite(damage[i])) {
            throw ConfigError("damage curve values must be finite and non-decreasing");
        }
    }
}

DamageCurve parse_damage_curve_csv(std::string_view content, BuildingCategory category)
{
    const auto rows = text::lines(content);
    if (rows.empty() || text::trim(rows[0]) != "depth_m,value") {
        throw ParseError("expected header 'depth_m,value'", 1);
    }
    DamageCurve curve;
    curve.category = category;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (text::trim(rows[i]).empty()) {
            continue;
        }
        const auto fields = text::split(rows[i], ',');
        if (fields.size() != 2) {
            throw ParseError("expected two columns", i + 1);
        }
        curve.depth.push_back(text::parse_double(fields[0], i + 1));
        curve.damage.push_back(text::parse_double(fields[1], i + 1));
    }
    curve.validate();
    return curve;
}

double damage_lookup(const DamageCurve& curve, double depth)
{
    if (!(depth >= 0.0)) {
        throw DomainError("flood depth must be non-negative");
    }
    const auto it = std::upper_bound(curve.depth.begin(), curve.depth.end(), depth);
    if (it == curve.depth.end()) {
        return curve.damage.back();
    }
    const auto hi = static_cast<std::size_t>(it - curve.depth.begin());
    const std::size_t lo = hi - 1;
    const double t = (depth - curve.depth[lo]) / (curve.depth[hi] - curve.depth[lo]);
    return curve.damage[lo] + t * (curve.damage[hi] - curve.damage[lo]);
}

bool BufferZone::contains(Point p) const
{
    return bgi::contains(footprint, p) || distance_to_boundary(footprint, p) <= distance;
}

BoundingBox BufferZone::bounds() const
{
    auto box = bounding_box(footprint);
    box.xmin -= distance;
    box.ymin -= distance;
    box.xmax += distance;
    box.ymax += distance;
    return box;
}

Polygon BufferZone::to_polygon(int arc_segments) const
{
    Ring ring = footprint.rings.at(0);
    if (signed_ring_area(ring) < 0.0) {
        std::reverse(ring.begin(), ring.end());
    }
    const std::size_t n = ring.size();
    auto normal = [&](std::size_t from, std::size_t to) {
        const double dx = ring[to].x - ring[from].x;
        const double dy = ring[to].y - ring[from].y;
        const double len = std::hypot(dx, dy);
        return Point{dy / len, -dx / len};
    };
    Ring out;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t prev = (i + n - 1) % n;
        const std::size_t next = (i + 1) % n;
        const Point n1 = normal(prev, i);
        const Point n2 = normal(i, next);
        const Point v = ring[i];
        const double turn = n1.x * n2.y - n1.y * n2.x;
        if (turn > 1e-12) {
            double a1 = std::atan2(n1.y, n1.x);
            double a2 = std::atan2(n2.y, n2.x);
            if (a2 < a1) {
                a2 += 2.0 * std::numbers::pi;
            }
            const int segs = std::max(1, static_cast<int>(std::ceil(arc_segments * (a2 - a1) / (0.5 * std::numbers::pi))));
            for (int s = 0; s <= segs; ++s) {
                // Pin the endpoints to the exact edge normals.
                Point dir = s == 0 ? n1 : s == segs ? n2 : Point{std::cos(a1 + (a2 - a1) * s / segs), std::sin(a1 + (a2 - a1) * s / segs)};
                out.push_back({v.x + distance * dir.x, v.y + distance * dir.y});
            }
        } else {
            // Reflex or straight vertex: intersection of the two offset edges.
            const double denom = 1.0 + n1.x * n2.x + n1.y * n2.y;
            out.push_back({v.x + distance * (n1.x + n2.x) / denom, v.y + distance * (n1.y + n2.y) / denom});
        }
    }
    return Polygon{{std::move(out)}};
}

BufferZone building_buffer(const Building& b, double cellsize)
{
    if (!(cellsize > 0.0)) {
        throw DomainError("cellsize must be positive");
    }
    validate_polygon(b.footprint);
    return BufferZone{b.footprint, kBufferCellFactor * cellsize};
}

double percentile_linear(std::vector<double> sample, double q)
{
    if (sample.empty()) {
        throw InputError("percentile of an empty sample");
    }
    std::sort(sample.begin(), sample.end());
    const double rank = q * static_cast<double>(sample.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const std::size_t hi = std::min(lo + 1, sample.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return sample[lo] + frac * (sample[hi] - sample[lo]);
}

std::optional<DepthStats> depth_stats(std::span<const double> sample)
{
    if (sample.empty()) {
        return std::nullopt;
    }
    DepthStats s;
    s.mean = std::accumulate(sample.begin(), sample.end(), 0.0) / static_cast<double>(sample.size());
    s.p90 = percentile_linear({sample.begin(), sample.end()}, 0.9);
    return s;
}

std::vector<std::size_t> buffer_sample_cells(const Catchment& catchment, const Building& b)
{
    const auto& grid = catchment.grid;
    const auto buffer = building_buffer(b, grid.cellsize);
    const auto box = buffer.bounds();
    const double ytop = grid.yll + grid.nrows * grid.cellsize;
    const int c0 = std::max(0, static_cast<int>(std::floor((box.xmin - grid.xll) / grid.cellsize - 0.5)));
    const int c1 = std::min(grid.ncols - 1, static_cast<int>(std::ceil((box.xmax - grid.xll) / grid.cellsize - 0.5)));
    const int r0 = std::max(0, static_cast<int>(std::floor((ytop - box.ymax) / grid.cellsize - 0.5)));
    const int r1 = std::min(grid.nrows - 1, static_cast<int>(std::ceil((ytop - box.ymin) / grid.cellsize - 0.5)));
    std::vector<std::size_t> cells;
    for (int row = r0; row <= r1; ++row) {
        for (int col = c0; col <= c1; ++col) {
            const std::size_t idx = grid.index(row, col);
            if (catchment.mask[idx] == LandClass::building) {
                continue;
            }
            const Point p = grid.centre(row, col);
            if (!contains(b.footprint, p) && distance_to_boundary(b.footprint, p) <= buffer.distance) {
                cells.push_back(idx);
            }
        }
    }
    return cells;
}

std::optional<DepthStats> depth_stats(const DepthField& field, const Catchment& catchment, const Building& b)
{
    std::vector<double> sample;
    for (const auto idx : buffer_sample_cells(catchment, b)) {
        sample.push_back(field.max_depth[idx]);
    }
    return depth_stats(sample);
}

int classify_risk(double d_mean, double d_p90)
{
    return (d_mean < 0.1 && d_p90 < 0.3) ? 0 : 1;
}

RiskAssessor::RiskAssessor(const Catchment& catchment, DamageCurves curves)
    : catchment_(&catchment), curves_(std::move(curves))
{
    if (!curves_.residential || !curves_.non_residential) {
        throw ConfigError("damage curves for both residential and non_residential buildings are required");
    }
    curves_.residential->validate();
    curves_.non_residential->validate();
    samples_.reserve(catchment.buildings.size());
    for (const auto& b : catchment.buildings) {
        samples_.push_back(buffer_sample_cells(catchment, b));
    }
}

BuildingRisk RiskAssessor::assess_one(std::size_t i, std::span<const double> max_depth) const
{
    const auto& b = catchment_->buildings[i];
    BuildingRisk r;
    r.building_id = b.id;
    r.category = b.category;
    std::vector<double> sample;
    sample.reserve(samples_[i].size());
    for (const auto idx : samples_[i]) {
        sample.push_back(max_depth[idx]);
    }
    const auto stats = depth_stats(sample);
    if (!stats) {
        r.assessable = false;
        return r;
    }
    r.d_mean = stats->mean;
    r.d_p90 = stats->p90;
    r.at_risk = classify_risk(r.d_mean, r.d_p90);
    if (r.at_risk == 1) {
        r.ddc = b.category == BuildingCategory::residential
                    ? damage_lookup(*curves_.residential, r.d_p90)
                    : b.area * damage_lookup(*curves_.non_residential, r.d_p90);
    }
    return r;
}

DdcResult RiskAssessor::assess(std::span<const double> max_depth) const
{
    if (max_depth.size() != catchment_->grid.cell_count()) {
        throw InputError("depth field does not match the catchment grid");
    }
    DdcResult out;
    out.buildings.reserve(catchment_->buildings.size());
    for (std::size_t i = 0; i < catchment_->buildings.size(); ++i) {
        out.buildings.push_back(assess_one(i, max_depth));
        out.total += out.buildings.back().ddc;
    }
    return out;
}

double RiskAssessor::total_ddc(std::span<const double> max_depth) const
{
    return assess(max_depth).total;
}

DdcResult candidate_ddc(const DepthField& field, const Catchment& catchment, const DamageCurves& curves)
{
    return RiskAssessor(catchment, curves).assess(field.max_depth);
}

std::string write_building_risk_csv(const std::vector<BuildingRisk>& risks)
{
    std::ostringstream out;
    out << "building_id,category,d_mean,d_p90,at_risk,ddc\n";
    for (const auto& r : risks) {
        out << r.building_id << ',' << to_string(r.category) << ',' << text::format_double(r.d_mean) << ','
            << text::format_double(r.d_p90) << ',' << r.at_risk << ',' << text::format_double(r.ddc) << '\n';
    }
    return out.str();
}

} // namespace bgi
