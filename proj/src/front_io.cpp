#include "bgiopt/front_io.hpp"

#include "bgiopt/errors.hpp"
#include "bgiopt/text.hpp"

#include <json.hpp>

#include <sstream>

namespace bgi {

FrontTable FrontTable::from_front(const ParetoFront& front, std::span<const double> periods)
{
    FrontTable t;
    t.periods.assign(periods.begin(), periods.end());
    for (std::size_t i = 0; i < front.size(); ++i) {
        const auto& ind = front[i];
        FrontRow row{i, ind.objectives().lcc, ind.objectives().risk, ind.genome.to_hex(), {}};
        if (!periods.empty()) {
            if (ind.eval.ddc_by_period.size() != periods.size()) {
                throw InputError("solution " + std::to_string(i) + " lacks per-period DDC values");
            }
            row.ddc = ind.eval.ddc_by_period;
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

ParetoFront FrontTable::to_front(std::size_t n_zones) const
{
    ParetoFront front;
    for (const auto& row : rows) {
        Individual ind;
        ind.genome = Genome::from_hex(row.genome_hex, n_zones);
        ind.eval.objectives = {row.lcc, row.risk};
        ind.eval.ddc_by_period = row.ddc;
        front.push_back(std::move(ind));
    }
    return front;
}

FrontCurve FrontTable::curve(std::string label) const
{
    std::vector<FrontPoint> pts;
    for (const auto& row : rows) {
        pts.push_back({row.lcc, row.risk});
    }
    return FrontCurve(std::move(pts), std::move(label));
}

std::string write_front_csv(const FrontTable& table)
{
    std::ostringstream out;
    out << "solution_id,lcc,risk,genome_hex";
    for (const double t : table.periods) {
        out << ",ddc_T" << text::format_double(t);
    }
    out << '\n';
    for (const auto& row : table.rows) {
        out << row.solution_id << ',' << text::format_double(row.lcc) << ',' << text::format_double(row.risk) << ','
            << row.genome_hex;
        for (const double d : row.ddc) {
            out << ',' << text::format_double(d);
        }
        out << '\n';
    }
    return out.str();
}

FrontTable parse_front_csv(std::string_view content)
{
    const auto rows = text::lines(content);
    if (rows.empty()) {
        throw ParseError("empty front file", 1);
    }
    const auto header = text::split(text::trim(rows[0]), ',');
    if (header.size() < 4 || header[0] != "solution_id" || header[1] != "lcc" || header[2] != "risk" ||
        header[3] != "genome_hex") {
        throw ParseError("expected header 'solution_id,lcc,risk,genome_hex[,ddc_T...]'", 1);
    }
    FrontTable t;
    for (std::size_t k = 4; k < header.size(); ++k) {
        const auto name = text::trim(header[k]);
        if (name.substr(0, 5) != "ddc_T") {
            throw ParseError("unexpected column '" + std::string(name) + "'", 1);
        }
        t.periods.push_back(text::parse_double(name.substr(5), 1));
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const std::size_t line = i + 1;
        if (text::trim(rows[i]).empty()) {
            continue;
        }
        const auto f = text::split(text::trim(rows[i]), ',');
        if (f.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) + " columns", line);
        }
        FrontRow row;
        const auto id = text::parse_int(f[0], line);
        if (id < 0) {
            throw ParseError("negative solution_id", line);
        }
        row.solution_id = static_cast<std::size_t>(id);
        row.lcc = text::parse_double(f[1], line);
        row.risk = text::parse_double(f[2], line);
        row.genome_hex = std::string(text::trim(f[3]));
        for (std::size_t k = 4; k < f.size(); ++k) {
            row.ddc.push_back(text::parse_double(f[k], line));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string write_metrics_csv(std::span<const MetricRow> rows)
{
    std::ostringstream out;
    out << "metric,return_period,value,percent\n";
    for (const auto& r : rows) {
        out << r.metric << ',';
        if (r.return_period) {
            out << text::format_double(*r.return_period);
        }
        out << ',' << text::format_double(r.value) << ',';
        if (r.percent) {
            out << text::format_double(*r.percent);
        }
        out << '\n';
    }
    return out.str();
}

namespace {

nlohmann::json ring_json(const Ring& ring)
{
    auto coords = nlohmann::json::array();
    for (const auto& p : ring) {
        coords.push_back({p.x, p.y});
    }
    if (!ring.empty()) {
        coords.push_back({ring.front().x, ring.front().y});
    }
    return coords;
}

} // namespace

std::string write_zone_contribution_geojson(const Catchment& catchment, std::span<const double> contribution)
{
    if (contribution.size() != catchment.zones.size()) {
        throw InputError("contribution vector does not match the zone count");
    }
    auto features = nlohmann::json::array();
    for (std::size_t i = 0; i < catchment.zones.size(); ++i) {
        const auto& z = catchment.zones[i];
        auto polys = nlohmann::json::array();
        for (const auto& poly : z.polygons) {
            auto rings = nlohmann::json::array();
            for (const auto& ring : poly.rings) {
                rings.push_back(ring_json(ring));
            }
            polys.push_back(std::move(rings));
        }
        features.push_back({{"type", "Feature"},
                            {"properties", {{"index", z.index}, {"contribution", contribution[i]}}},
                            {"geometry", {{"type", "MultiPolygon"}, {"coordinates", std::move(polys)}}}});
    }
    const nlohmann::json doc{{"type", "FeatureCollection"}, {"features", std::move(features)}};
    return doc.dump(1) + "\n";
}

} // namespace bgi
