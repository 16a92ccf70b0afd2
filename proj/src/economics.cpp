#include "bgiopt/economics.hpp"

#include "bgiopt/errors.hpp"

#include <cmath>

namespace bgi {

void CostParams::validate() const
{
    if (!(capital_per_m2 >= 0.0) || !(operational_per_m2_yr >= 0.0) || !(inflation >= 0.0) || inflate_years < 0) {
        throw ConfigError("cost parameters must be non-negative");
    }
    if (lifespan_years < 1) {
        throw ConfigError("lifespan must be at least one year");
    }
}

double inflate(double base_value, double rate, int years)
{
    if (years < 0) {
        throw DomainError("inflation years must be non-negative");
    }
    return base_value * std::pow(1.0 + rate, years);
}

double unit_lcc(const CostParams& cp)
{
    cp.validate();
    return inflate(cp.capital_per_m2, cp.inflation, cp.inflate_years) +
           inflate(cp.operational_per_m2_yr, cp.inflation, cp.inflate_years) * cp.lifespan_years;
}

double zone_lcc(double zone_area, const CostParams& cp)
{
    return unit_lcc(cp) * zone_area;
}

double zone_lcc(const Zone& zone, const CostParams& cp)
{
    return zone_lcc(zone.area, cp);
}

double candidate_lcc(const Genome& genome, std::span<const Zone> zones, const CostParams& cp)
{
    if (genome.size() != zones.size()) {
        throw InputError("genome length " + std::to_string(genome.size()) + " does not match " +
                         std::to_string(zones.size()) + " zones");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < zones.size(); ++j) {
        if (genome[j]) {
            total += zone_lcc(zones[j], cp);
        }
    }
    return total;
}

void DdcByPeriod::validate() const
{
    if (periods.size() != ddc.size()) {
        throw InputError("period and DDC lists differ in length");
    }
    if (periods.size() < 2) {
        throw InputError("expected annual damage needs at least two return periods");
    }
    for (std::size_t k = 0; k < periods.size(); ++k) {
        if (!(periods[k] > 1.0) || (k > 0 && !(periods[k] > periods[k - 1]))) {
            throw InputError("return periods must exceed 1 and be strictly ascending");
        }
        if (!(ddc[k] >= 0.0)) {
            throw InputError("DDC values must be non-negative");
        }
    }
}

double d_infin(double ddc_last, double ddc_prev, double period_last, double period_prev)
{
    // (1/T_last) / (1/T_prev - 1/T_last) simplifies to T_prev / (T_last - T_prev).
    const double ratio = period_prev / (period_last - period_prev);
    const double value = (1.0 + ratio) * ddc_last - ratio * ddc_prev;
    return std::max(0.0, value);
}

double ead(const DdcByPeriod& d)
{
    d.validate();
    const std::size_t n = d.periods.size();
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        sum += (d.ddc[k] + d.ddc[k + 1]) * (1.0 / d.periods[k] - 1.0 / d.periods[k + 1]);
    }
    const double tail = d_infin(d.ddc[n - 1], d.ddc[n - 2], d.periods[n - 1], d.periods[n - 2]);
    sum += (d.ddc[n - 1] + tail) * (1.0 / d.periods[n - 1]);
    return 0.5 * sum;
}

std::optional<double> benefit_cost(double ead_baseline, double ead_bgi, double lifespan_years, double lcc)
{
    if (!(lcc > 0.0)) {
        return std::nullopt;
    }
    return (ead_baseline - ead_bgi) * lifespan_years / lcc;
}

} // namespace bgi
