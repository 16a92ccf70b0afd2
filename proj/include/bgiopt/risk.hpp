#pragma once

#include "bgiopt/catchment.hpp"
#include "bgiopt/flood.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bgi {

/// Depth (m) to damage. Residential values are per property; non-residential
/// values are per m^2 of footprint.
struct DamageCurve {
    BuildingCategory category = BuildingCategory::residential;
    std::vector<double> depth;
    std::vector<double> damage;

    void validate() const;
};

DamageCurve parse_damage_curve_csv(std::string_view content, BuildingCategory category);

struct DamageCurves {
    std::optional<DamageCurve> residential;
    std::optional<DamageCurve> non_residential;
};

/// Piecewise-linear lookup, clamped to the last point beyond the curve.
double damage_lookup(const DamageCurve& curve, double depth);

/// Rounded outward offset of a building footprint. Membership is exact
/// (inside the footprint or within `distance` of its boundary).
struct BufferZone {
    Polygon footprint;
    double distance = 0.0;

    bool contains(Point p) const;
    BoundingBox bounds() const;
    /// Polygon approximation with vertices on the offset curve; convex
    /// corners are replaced by arcs of `arc_segments` chords.
    Polygon to_polygon(int arc_segments = 8) const;
};

inline constexpr double kBufferCellFactor = 1.5;

BufferZone building_buffer(const Building& b, double cellsize);

struct DepthStats {
    double mean = 0.0;
    double p90 = 0.0;
};

/// Linear interpolation between closest ranks at rank q*(n-1) of the sorted sample.
double percentile_linear(std::vector<double> sample, double q);

/// nullopt for an empty sample.
std::optional<DepthStats> depth_stats(std::span<const double> sample);

/// Max depths of non-building cells whose centres fall inside the buffer but
/// outside the footprint.
std::vector<std::size_t> buffer_sample_cells(const Catchment& catchment, const Building& b);
std::optional<DepthStats> depth_stats(const DepthField& field, const Catchment& catchment, const Building& b);

/// 0 (not at risk) iff d_mean < 0.1 m and d_p90 < 0.3 m.
int classify_risk(double d_mean, double d_p90);

struct BuildingRisk {
    std::string building_id;
    BuildingCategory category = BuildingCategory::residential;
    double d_mean = 0.0;
    double d_p90 = 0.0;
    int at_risk = 0;
    double ddc = 0.0;
    bool assessable = true;
};

struct DdcResult {
    double total = 0.0;
    std::vector<BuildingRisk> buildings;
};

/// Precomputes buffer samples once per catchment; thread-safe after construction.
class RiskAssessor {
public:
    RiskAssessor(const Catchment& catchment, DamageCurves curves);

    DdcResult assess(std::span<const double> max_depth) const;
    double total_ddc(std::span<const double> max_depth) const;

    const DamageCurves& curves() const { return curves_; }

private:
    BuildingRisk assess_one(std::size_t i, std::span<const double> max_depth) const;

    const Catchment* catchment_;
    DamageCurves curves_;
    std::vector<std::vector<std::size_t>> samples_;
};

DdcResult candidate_ddc(const DepthField& field, const Catchment& catchment, const DamageCurves& curves);

std::string write_building_risk_csv(const std::vector<BuildingRisk>& risks);

} // namespace bgi
