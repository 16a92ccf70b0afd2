#include "bgiopt/config.hpp"

#include "bgiopt/errors.hpp"
#include "bgiopt/text.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace bgi {

IniDocument IniDocument::parse(std::string_view content)
{
    IniDocument doc;
    std::string section;
    const auto rows = text::lines(content);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t line = i + 1;
        auto row = text::trim(rows[i]);
        if (row.empty() || row.front() == '#' || row.front() == ';') {
            continue;
        }
        if (row.front() == '[') {
            if (row.back() != ']') {
                throw ParseError("unterminated section header", line);
            }
            section = std::string(text::trim(row.substr(1, row.size() - 2)));
            if (section.empty()) {
                throw ParseError("empty section name", line);
            }
            if (doc.sections.count(section) > 0) {
                throw ParseError("duplicate section [" + section + "]", line);
            }
            doc.sections[section];
            continue;
        }
        const auto eq = row.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("expected 'key = value'", line);
        }
        if (section.empty()) {
            throw ParseError("key outside of any section", line);
        }
        const std::string key(text::trim(row.substr(0, eq)));
        auto value = text::trim(row.substr(eq + 1));
        if (const auto hash = value.find(" #"); hash != std::string_view::npos) {
            value = text::trim(value.substr(0, hash));
        }
        auto& entries = doc.sections[section];
        if (entries.count(key) > 0) {
            throw ParseError("duplicate key '" + key + "' in [" + section + "]", line);
        }
        entries[key] = {std::string(value), line};
    }
    return doc;
}

namespace {

class Reader {
public:
    Reader(const IniDocument& doc, std::filesystem::path base) : doc_(doc), base_(std::move(base)) {}

    void allow(const std::string& section, std::set<std::string> keys) { schema_[section] = std::move(keys); }

    void check_unknown() const
    {
        for (const auto& [section, entries] : doc_.sections) {
            const auto it = schema_.find(section);
            if (it == schema_.end()) {
                throw ConfigError("unknown section [" + section + "]");
            }
            for (const auto& [key, entry] : entries) {
                if (it->second.count(key) == 0) {
                    throw ConfigError("line " + std::to_string(entry.line) + ": unknown key '" + key + "' in [" +
                                      section + "]");
                }
            }
        }
    }

    const IniDocument::Entry* find(const std::string& section, const std::string& key) const
    {
        const auto s = doc_.sections.find(section);
        if (s == doc_.sections.end()) {
            return nullptr;
        }
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    const IniDocument::Entry& require(const std::string& section, const std::string& key) const
    {
        const auto* e = find(section, key);
        if (e == nullptr) {
            throw ConfigError("missing required key '" + key + "' in [" + section + "]");
        }
        return *e;
    }

    void number(const std::string& section, const std::string& key, double& out, bool required = false) const
    {
        const auto* e = required ? &require(section, key) : find(section, key);
        if (e != nullptr) {
            out = text::parse_double(e->value, e->line);
        }
    }

    template <typename Int>
    void integer(const std::string& section, const std::string& key, Int& out) const
    {
        if (const auto* e = find(section, key)) {
            const auto v = text::parse_int(e->value, e->line);
            if (v < 0) {
                throw ParseError("'" + key + "' must be non-negative", e->line);
            }
            out = static_cast<Int>(v);
        }
    }

    void path(const std::string& section, const std::string& key, std::string& out, bool required) const
    {
        const auto* e = required ? &require(section, key) : find(section, key);
        if (e == nullptr) {
            return;
        }
        std::filesystem::path p(e->value);
        if (p.is_relative()) {
            p = base_ / p;
        }
        out = p.lexically_normal().string();
    }

    void list(const std::string& section, const std::string& key, std::vector<double>& out) const
    {
        if (const auto* e = find(section, key)) {
            out.clear();
            for (const auto token : text::split(e->value, ',')) {
                out.push_back(text::parse_double(token, e->line));
            }
        }
    }

    void boolean(const std::string& section, const std::string& key, bool& out) const
    {
        if (const auto* e = find(section, key)) {
            if (e->value == "true" || e->value == "on" || e->value == "1") {
                out = true;
            } else if (e->value == "false" || e->value == "off" || e->value == "0") {
                out = false;
            } else {
                throw ParseError("'" + key + "' must be true or false", e->line);
            }
        }
    }

    std::string string(const std::string& section, const std::string& key, std::string fallback) const
    {
        const auto* e = find(section, key);
        return e == nullptr ? fallback : e->value;
    }

private:
    const IniDocument& doc_;
    std::filesystem::path base_;
    std::map<std::string, std::set<std::string>> schema_;
};

} // namespace

void RunConfig::validate() const
{
    ddf.validate();
    profile.validate();
    flood.validate();
    costs.validate();
    ga.validate();
    if (!(duration_min > 0.0)) {
        throw ConfigError("storm duration must be positive");
    }
    if (storm_steps < 2 || storm_steps % 2 != 0) {
        throw ConfigError("storm steps must be even and at least 2");
    }
    if (return_periods.size() < 2) {
        throw ConfigError("[ead] return_periods needs at least two periods");
    }
    for (std::size_t k = 0; k < return_periods.size(); ++k) {
        if (!(return_periods[k] > 1.0) || (k > 0 && !(return_periods[k] > return_periods[k - 1]))) {
            throw ConfigError("[ead] return_periods must exceed 1 and be strictly ascending");
        }
    }
    for (const double u : uplifts) {
        if (!(u >= 0.0)) {
            throw ConfigError("uplift levels must be non-negative");
        }
    }
    if (!(return_period > 1.0)) {
        throw ConfigError("return_period must exceed 1");
    }
    if (workers < 1) {
        throw ConfigError("workers must be at least 1");
    }
}

RunConfig parse_run_config(std::string_view content, const std::filesystem::path& base_dir)
{
    const auto doc = IniDocument::parse(content);
    Reader r(doc, base_dir);
    r.allow("paths", {"dem", "landuse", "buildings", "zones", "residential_curve", "non_residential_curve",
                      "output_dir"});
    r.allow("storm", {"c", "d1", "e", "f", "profile_a", "profile_b", "duration_min", "steps"});
    r.allow("flood", {"manning_impervious", "manning_green", "manning_permeable", "infil_green", "infil_permeable",
                      "infil_impervious", "cfl_alpha", "dt_min", "dt_max", "settle_time", "boundary",
                      "min_flow_depth", "open_edge_slope"});
    r.allow("costs", {"capital_per_m2", "operational_per_m2_yr", "inflation", "inflate_years", "lifespan_years"});
    r.allow("ead", {"return_periods"});
    r.allow("ga", {"population", "generations", "crossover_rate", "mutation_rate", "seed"});
    r.allow("uplift", {"levels"});
    r.allow("run", {"workers", "cache", "return_period"});
    r.check_unknown();

    RunConfig cfg;
    r.path("paths", "dem", cfg.catchment.dem, true);
    r.path("paths", "landuse", cfg.catchment.landuse, false);
    r.path("paths", "buildings", cfg.catchment.buildings, true);
    r.path("paths", "zones", cfg.catchment.zones, true);
    r.path("paths", "residential_curve", cfg.residential_curve, true);
    r.path("paths", "non_residential_curve", cfg.non_residential_curve, true);
    cfg.output_dir = (base_dir / "out").lexically_normal().string();
    r.path("paths", "output_dir", cfg.output_dir, false);

    r.number("storm", "c", cfg.ddf.c, true);
    r.number("storm", "d1", cfg.ddf.d1, true);
    r.number("storm", "e", cfg.ddf.e, true);
    r.number("storm", "f", cfg.ddf.f, true);
    r.number("storm", "profile_a", cfg.profile.a, true);
    r.number("storm", "profile_b", cfg.profile.b, true);
    r.number("storm", "duration_min", cfg.duration_min);
    r.integer("storm", "steps", cfg.storm_steps);

    auto& fp = cfg.flood;
    r.number("flood", "manning_impervious", fp.manning_impervious);
    r.number("flood", "manning_green", fp.manning_green);
    r.number("flood", "manning_permeable", fp.manning_permeable);
    r.number("flood", "infil_green", fp.infil_green);
    r.number("flood", "infil_permeable", fp.infil_permeable_active);
    r.number("flood", "infil_impervious", fp.infil_impervious);
    r.number("flood", "cfl_alpha", fp.cfl_alpha);
    r.number("flood", "dt_min", fp.dt_min);
    r.number("flood", "dt_max", fp.dt_max);
    r.number("flood", "settle_time", fp.settle_time);
    fp.boundary = parse_boundary(r.string("flood", "boundary", "closed"));
    r.number("flood", "min_flow_depth", fp.min_flow_depth);
    r.number("flood", "open_edge_slope", fp.open_edge_slope);

    r.number("costs", "capital_per_m2", cfg.costs.capital_per_m2);
    r.number("costs", "operational_per_m2_yr", cfg.costs.operational_per_m2_yr);
    r.number("costs", "inflation", cfg.costs.inflation);
    r.integer("costs", "inflate_years", cfg.costs.inflate_years);
    r.integer("costs", "lifespan_years", cfg.costs.lifespan_years);

    r.list("ead", "return_periods", cfg.return_periods);

    r.integer("ga", "population", cfg.ga.population);
    r.integer("ga", "generations", cfg.ga.generations);
    r.number("ga", "crossover_rate", cfg.ga.crossover_rate);
    if (r.find("ga", "mutation_rate") != nullptr) {
        double m = 0.0;
        r.number("ga", "mutation_rate", m);
        cfg.ga.mutation_rate = m;
    }
    r.integer("ga", "seed", cfg.ga.seed);

    r.list("uplift", "levels", cfg.uplifts);

    r.integer("run", "workers", cfg.workers);
    r.boolean("run", "cache", cfg.cache);
    r.number("run", "return_period", cfg.return_period);

    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::string& path)
{
    const auto content = text::read_file(path);
    auto base = std::filesystem::path(path).parent_path();
    if (base.empty()) {
        base = ".";
    }
    return parse_run_config(content, base);
}

} // namespace bgi
