#include "bgiopt/config.hpp"
#include "bgiopt/errors.hpp"

#include <gtest/gtest.h>

#include <string>

using namespace bgi;

namespace {

const std::string kMinimal = R"([paths]
dem = dem.asc
buildings = b.geojson
zones = z.geojson
residential_curve = r.csv
non_residential_curve = n.csv

[storm]
c = -0.02
d1 = 0.3
e = 0.3
f = 2.4
profile_a = 0.1
profile_b = 0.8
)";

RunConfig parse(const std::string& extra)
{
    return parse_run_config(kMinimal + extra, "/base");
}

} // namespace

TEST(Ini, ParsesSectionsCommentsAndLines)
{
    const auto doc = IniDocument::parse("# top\n[a]\nx = 1 # trailing\n; other\ny=two words\n\n[b]\nz = 3\n");
    EXPECT_EQ(doc.sections.at("a").at("x").value, "1");
    EXPECT_EQ(doc.sections.at("a").at("y").value, "two words");
    EXPECT_EQ(doc.sections.at("a").at("y").line, 5U);
    EXPECT_EQ(doc.sections.at("b").at("z").value, "3");
}

TEST(Ini, Errors)
{
    auto line_of = [](const std::string& s) -> std::size_t {
        try {
            IniDocument::parse(s);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("[a\n"), 1U);
    EXPECT_EQ(line_of("x = 1\n"), 1U);
    EXPECT_EQ(line_of("[a]\nnovalue\n"), 2U);
    EXPECT_EQ(line_of("[a]\nx = 1\nx = 2\n"), 3U);
    EXPECT_EQ(line_of("[a]\n[a]\n"), 2U);
}

TEST(RunConfig, DefaultsAndPaths)
{
    const auto cfg = parse("");
    EXPECT_EQ(cfg.catchment.dem, "/base/dem.asc");
    EXPECT_EQ(cfg.catchment.landuse, "");
    EXPECT_EQ(cfg.output_dir, "/base/out");
    EXPECT_DOUBLE_EQ(cfg.ddf.c, -0.02);
    EXPECT_DOUBLE_EQ(cfg.profile.b, 0.8);
    EXPECT_EQ(cfg.storm_steps, 30);
    EXPECT_EQ(cfg.return_periods, (std::vector<double>{10, 20, 30, 50, 100}));
    EXPECT_EQ(cfg.uplifts, (std::vector<double>{0.15, 0.30, 0.45}));
    EXPECT_EQ(cfg.flood.boundary, Boundary::closed);
    EXPECT_EQ(cfg.workers, 1U);
    EXPECT_TRUE(cfg.cache);
    EXPECT_FALSE(cfg.ga.mutation_rate.has_value());
}

TEST(RunConfig, Overrides)
{
    const auto cfg = parse("[flood]\nboundary = open_at_edges\ninfil_permeable = 45\n"
                           "[ga]\npopulation = 24\nmutation_rate = 0.05\nseed = 9\n"
                           "[ead]\nreturn_periods = 5, 25\n[uplift]\nlevels = 0.2\n"
                           "[run]\nworkers = 3\ncache = false\nreturn_period = 50\n");
    EXPECT_EQ(cfg.flood.boundary, Boundary::open);
    EXPECT_DOUBLE_EQ(cfg.flood.infil_permeable_active, 45.0);
    EXPECT_EQ(cfg.ga.population, 24U);
    EXPECT_DOUBLE_EQ(*cfg.ga.mutation_rate, 0.05);
    EXPECT_EQ(cfg.ga.seed, 9U);
    EXPECT_EQ(cfg.return_periods, (std::vector<double>{5, 25}));
    EXPECT_EQ(cfg.uplifts, (std::vector<double>{0.2}));
    EXPECT_EQ(cfg.workers, 3U);
    EXPECT_FALSE(cfg.cache);
    EXPECT_DOUBLE_EQ(cfg.return_period, 50.0);
}

TEST(RunConfig, AbsolutePathsKept)
{
    const auto cfg = parse_run_config(kMinimal + "", "rel/dir");
    EXPECT_EQ(cfg.catchment.dem, "rel/dir/dem.asc");
    std::string abs = kMinimal;
    abs.replace(abs.find("dem.asc"), 7, "/data/dem.asc");
    EXPECT_EQ(parse_run_config(abs, "/base").catchment.dem, "/data/dem.asc");
}

TEST(RunConfig, Rejections)
{
    EXPECT_THROW(parse("[bogus]\nx = 1\n"), ConfigError);
    EXPECT_THROW(parse("[flood]\nmanning = 0.1\n"), ConfigError);
    EXPECT_THROW(parse("[flood]\nboundary = leaky\n"), ConfigError);
    EXPECT_THROW(parse("[flood]\ncfl_alpha = 2\n"), ConfigError);
    EXPECT_THROW(parse("[ga]\npopulation = 7\n"), ConfigError);
    EXPECT_THROW(parse("[ga]\npopulation = ten\n"), ParseError);
    EXPECT_THROW(parse("[ga]\npopulation = -4\n"), ParseError);
    EXPECT_THROW(parse("[storm]\n"), ParseError); // duplicate section
    EXPECT_THROW(parse("[ead]\nreturn_periods = 50, 20\n"), ConfigError);
    EXPECT_THROW(parse("[ead]\nreturn_periods = 50\n"), ConfigError);
    EXPECT_THROW(parse("[run]\ncache = maybe\n"), ParseError);
    EXPECT_THROW(parse("[run]\nworkers = 0\n"), ConfigError);
    EXPECT_THROW(parse("[uplift]\nlevels = -0.1\n"), ConfigError);
    std::string missing = kMinimal;
    missing.erase(missing.find("zones ="), std::string("zones = z.geojson\n").size());
    EXPECT_THROW(parse_run_config(missing, "/base"), ConfigError);
    EXPECT_THROW(load_run_config("/nonexistent/bgiopt.ini"), InputError);
}

TEST(RunConfig, FixtureLoads)
{
    const auto cfg = load_run_config(std::string(BGI_FIXTURE_DIR) + "/synthetic64/bgiopt.ini");
    EXPECT_EQ(cfg.ga.population, 16U);
    EXPECT_DOUBLE_EQ(cfg.flood.infil_permeable_active, 100.0);
    EXPECT_DOUBLE_EQ(cfg.costs.capital_per_m2, 80.0);
}
