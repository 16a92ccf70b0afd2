#pragma once

#include "bgiopt/nsga2.hpp"

#include <string>
#include <vector>

namespace bgi {

struct FrontPoint {
    double cost = 0.0;
    double risk = 0.0;
};

/// Points sorted by cost; equal costs collapse to their minimum risk.
class FrontCurve {
public:
    FrontCurve() = default;
    FrontCurve(std::vector<FrontPoint> points, std::string label = {});

    static FrontCurve from_front(const ParetoFront& front, std::string label = {});

    const std::vector<FrontPoint>& points() const { return points_; }
    const std::string& label() const { return label_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }

    /// Points that strictly lower the running minimum risk (the staircase corners).
    FrontCurve envelope() const;

private:
    std::vector<FrontPoint> points_;
    std::string label_;
};

/// Minimum risk over points with cost <= c. Throws DomainError below the first cost.
double envelope_risk(const FrontCurve& front, double cost);

struct RiskDifferences {
    double max_rd = 0.0;
    double med_rd = 0.0;
    std::vector<double> costs; // common cost set
};

/// Absolute staircase-envelope gaps at the union of both fronts' costs,
/// restricted to the overlap of their cost spans.
RiskDifferences risk_differences(const FrontCurve& ref, const FrontCurve& trial);

struct RiskRange {
    double baseline_ddc = 0.0;
    double max_intervention_ddc = 0.0;

    double span() const { return baseline_ddc - max_intervention_ddc; }
};

double as_percent_of_range(double value, const RiskRange& rr);

/// Trapezoidal area under the sorted front points.
double aupf(const FrontCurve& front);

struct DeltaAupf {
    double absolute = 0.0;
    double percent = 0.0;
};

DeltaAupf delta_aupf(double ref_area, double trial_area);

/// Per-zone share of the non-baseline front solutions that switch the zone on.
std::vector<double> zone_contribution(const ParetoFront& front);

} // namespace bgi
