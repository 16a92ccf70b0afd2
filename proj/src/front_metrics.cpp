#include "bgiopt/front_metrics.hpp"

#include "bgiopt/errors.hpp"

#include <algorithm>
#include <cmath>

namespace bgi {

FrontCurve::FrontCurve(std::vector<FrontPoint> points, std::string label) : label_(std::move(label))
{
    for (const auto& p : points) {
        if (!std::isfinite(p.cost) || !std::isfinite(p.risk)) {
            throw InputError("front points must be finite");
        }
    }
    std::sort(points.begin(), points.end(), [](const FrontPoint& a, const FrontPoint& b) {
        return a.cost != b.cost ? a.cost < b.cost : a.risk < b.risk;
    });
    for (const auto& p : points) {
        if (points_.empty() || points_.back().cost != p.cost) {
            points_.push_back(p);
        }
    }
}

FrontCurve FrontCurve::from_front(const ParetoFront& front, std::string label)
{
    std::vector<FrontPoint> pts;
    pts.reserve(front.size());
    for (const auto& ind : front) {
        pts.push_back({ind.objectives().lcc, ind.objectives().risk});
    }
    return FrontCurve(std::move(pts), std::move(label));
}

FrontCurve FrontCurve::envelope() const
{
    std::vector<FrontPoint> pts;
    for (const auto& p : points_) {
        if (pts.empty() || p.risk < pts.back().risk) {
            pts.push_back(p);
        }
    }
    return FrontCurve(std::move(pts), label_);
}

double envelope_risk(const FrontCurve& front, double cost)
{
    const auto& pts = front.points();
    if (pts.empty() || cost < pts.front().cost) {
        throw DomainError("cost lies below the cheapest front solution");
    }
    double best = pts.front().risk;
    for (const auto& p : pts) {
        if (p.cost > cost) {
            break;
        }
        best = std::min(best, p.risk);
    }
    return best;
}

RiskDifferences risk_differences(const FrontCurve& ref, const FrontCurve& trial)
{
    if (ref.empty() || trial.empty()) {
        throw InputError("risk differences need two non-empty fronts");
    }
    const double lo = std::max(ref.points().front().cost, trial.points().front().cost);
    const double hi = std::min(ref.points().back().cost, trial.points().back().cost);
    RiskDifferences out;
    for (const auto* f : {&ref, &trial}) {
        for (const auto& p : f->points()) {
            if (p.cost >= lo && p.cost <= hi) {
                out.costs.push_back(p.cost);
            }
        }
    }
    std::sort(out.costs.begin(), out.costs.end());
    out.costs.erase(std::unique(out.costs.begin(), out.costs.end()), out.costs.end());
    if (out.costs.empty()) {
        throw InputError("the fronts' cost spans do not overlap");
    }
    std::vector<double> gaps;
    gaps.reserve(out.costs.size());
    for (const double c : out.costs) {
        gaps.push_back(std::abs(envelope_risk(trial, c) - envelope_risk(ref, c)));
    }
    out.max_rd = *std::max_element(gaps.begin(), gaps.end());
    std::sort(gaps.begin(), gaps.end());
    const std::size_t m = gaps.size() / 2;
    out.med_rd = gaps.size() % 2 == 1 ? gaps[m] : 0.5 * (gaps[m - 1] + gaps[m]);
    return out;
}

double as_percent_of_range(double value, const RiskRange& rr)
{
    const double span = rr.span();
    if (span == 0.0) {
        throw DomainError("risk range is zero: baseline and maximum intervention risks are equal");
    }
    return 100.0 * value / span;
}

double aupf(const FrontCurve& front)
{
    const auto& pts = front.points();
    if (pts.size() < 2) {
        throw InputError("AUPF needs at least two front points");
    }
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        area += (pts[i + 1].cost - pts[i].cost) * (pts[i].risk + pts[i + 1].risk) / 2.0;
    }
    return area;
}

DeltaAupf delta_aupf(double ref_area, double trial_area)
{
    if (!(ref_area > 0.0)) {
        throw DomainError("reference AUPF must be positive");
    }
    const double absolute = trial_area - ref_area;
    return {absolute, 100.0 * absolute / ref_area};
}

std::vector<double> zone_contribution(const ParetoFront& front)
{
    if (front.empty()) {
        throw InputError("zone contribution of an empty front");
    }
    const std::size_t n = front.front().genome.size();
    std::vector<double> share(n, 0.0);
    std::size_t counted = 0;
    for (const auto& ind : front) {
        if (ind.genome.size() != n) {
            throw InputError("front genomes differ in length");
        }
        if (ind.genome.none()) {
            continue;
        }
        ++counted;
        for (std::size_t j = 0; j < n; ++j) {
            share[j] += ind.genome[j] ? 1.0 : 0.0;
        }
    }
    if (counted > 0) {
        for (auto& s : share) {
            s /= static_cast<double>(counted);
        }
    }
    return share;
}

} // namespace bgi
