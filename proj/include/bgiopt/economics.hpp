#pragma once

#include "bgiopt/catchment.hpp"
#include "bgiopt/genome.hpp"

#include <optional>
#include <span>
#include <vector>

namespace bgi {

struct CostParams {
    double capital_per_m2 = 0.0;
    double operational_per_m2_yr = 0.0;
    double inflation = 0.0;
    int inflate_years = 0; // guideline base year to analysis year
    int lifespan_years = 40;

    void validate() const;
};

/// FV = BV (1 + i)^n
double inflate(double base_value, double rate, int years);

/// Inflated capital plus inflated annual operational cost times the lifespan, per m^2.
double unit_lcc(const CostParams& cp);
double zone_lcc(double zone_area, const CostParams& cp);
double zone_lcc(const Zone& zone, const CostParams& cp);
double candidate_lcc(const Genome& genome, std::span<const Zone> zones, const CostParams& cp);

/// DDC per return period, periods strictly ascending.
struct DdcByPeriod {
    std::vector<double> periods;
    std::vector<double> ddc;

    void validate() const;
};

/// Extrapolated damage beyond the longest period from the two longest ones,
/// floored at zero. For (100, 50) this is max(0, 2*ddc_100 - ddc_50).
double d_infin(double ddc_last, double ddc_prev, double period_last = 100.0, double period_prev = 50.0);

/// Trapezoidal expected annual damage over exceedance probability, with the
/// tail closed by d_infin.
double ead(const DdcByPeriod& ddc);

/// nullopt when lcc is zero (the no-intervention baseline).
std::optional<double> benefit_cost(double ead_baseline, double ead_bgi, double lifespan_years, double lcc);

} // namespace bgi
