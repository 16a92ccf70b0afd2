#pragma once

#include "bgiopt/catchment.hpp"
#include "bgiopt/front_metrics.hpp"
#include "bgiopt/nsga2.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bgi {

struct FrontRow {
    std::size_t solution_id = 0;
    double lcc = 0.0;
    double risk = 0.0;
    std::string genome_hex;
    std::vector<double> ddc; // one per period column
};

/// `solution_id,lcc,risk,genome_hex[,ddc_T10,ddc_T20,...]`
struct FrontTable {
    std::vector<double> periods;
    std::vector<FrontRow> rows;

    static FrontTable from_front(const ParetoFront& front, std::span<const double> periods = {});
    ParetoFront to_front(std::size_t n_zones) const;
    FrontCurve curve(std::string label = {}) const;
};

std::string write_front_csv(const FrontTable& table);
FrontTable parse_front_csv(std::string_view content);

struct MetricRow {
    std::string metric;
    std::optional<double> return_period;
    double value = 0.0;
    std::optional<double> percent;
};

/// `metric,return_period,value,percent`; missing values are left empty.
std::string write_metrics_csv(std::span<const MetricRow> rows);

/// One feature per zone with properties `index` and `contribution`.
std::string write_zone_contribution_geojson(const Catchment& catchment, std::span<const double> contribution);

} // namespace bgi
