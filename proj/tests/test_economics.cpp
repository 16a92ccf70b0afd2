#include "bgiopt/economics.hpp"
#include "bgiopt/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace bgi;

namespace {

CostParams fixture_costs()
{
    return {80.0, 1.5, 0.02, 3, 40};
}

// Damage as a piecewise-linear function of exceedance probability, integrated
// by a fine midpoint rule from p = 0 to p = 1/T_first.
double ead_by_quadrature(const DdcByPeriod& d, double tail)
{
    std::vector<double> p{0.0};
    std::vector<double> v{tail};
    for (std::size_t k = d.periods.size(); k-- > 0;) {
        p.push_back(1.0 / d.periods[k]);
        v.push_back(d.ddc[k]);
    }
    const int n = 200000;
    const double h = p.back() / n;
    double total = 0.0;
    std::size_t seg = 0;
    for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) * h;
        while (x > p[seg + 1]) {
            ++seg;
        }
        const double t = (x - p[seg]) / (p[seg + 1] - p[seg]);
        total += (v[seg] + t * (v[seg + 1] - v[seg])) * h;
    }
    return total;
}

} // namespace

TEST(Costs, UnitLccHandComputed)
{
    const double f = 1.02 * 1.02 * 1.02;
    EXPECT_NEAR(unit_lcc(fixture_costs()), 80.0 * f + 1.5 * f * 40.0, 1e-10);
    EXPECT_NEAR(inflate(100.0, 0.05, 2), 110.25, 1e-12);
    EXPECT_NEAR(inflate(1.0, 0.029, 17), 1.62578, 1e-5);
    EXPECT_THROW(inflate(1.0, 0.1, -1), DomainError);
    EXPECT_NEAR(zone_lcc(10.0, fixture_costs()), 10.0 * unit_lcc(fixture_costs()), 1e-9);
}

TEST(Costs, Validation)
{
    CostParams cp = fixture_costs();
    cp.capital_per_m2 = -1.0;
    EXPECT_THROW(cp.validate(), ConfigError);
    cp = fixture_costs();
    cp.lifespan_years = 0;
    EXPECT_THROW(cp.validate(), ConfigError);
}

TEST(Costs, CandidateLccAdditive)
{
    std::vector<Zone> zones(3);
    zones[0].area = 100.0;
    zones[1].area = 50.0;
    zones[2].area = 25.0;
    const auto cp = fixture_costs();
    const double u = unit_lcc(cp);
    EXPECT_EQ(candidate_lcc(Genome(3), zones, cp), 0.0);
    EXPECT_NEAR(candidate_lcc(Genome::from_bits("101"), zones, cp), 125.0 * u, 1e-8);
    EXPECT_NEAR(candidate_lcc(Genome(3, true), zones, cp), 175.0 * u, 1e-8);
    EXPECT_THROW(candidate_lcc(Genome(2), zones, cp), InputError);
}

TEST(Ead, DInfin)
{
    EXPECT_DOUBLE_EQ(d_infin(100.0, 60.0), 140.0);
    EXPECT_DOUBLE_EQ(d_infin(10.0, 30.0), 0.0);
    EXPECT_DOUBLE_EQ(d_infin(50.0, 50.0), 50.0);
}

TEST(Ead, HandComputedTwoPeriods)
{
    // Trapezoid between 1/50 and 1/100, then (d100 + dinf)/2 * 1/100.
    const DdcByPeriod d{{50.0, 100.0}, {60.0, 100.0}};
    EXPECT_NEAR(ead(d), 0.5 * 160.0 * 0.01 + 0.5 * 240.0 * 0.01, 1e-12);
}

TEST(Ead, MatchesQuadratureProperty)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1e6);
    for (int trial = 0; trial < 40; ++trial) {
        DdcByPeriod d{{10, 20, 30, 50, 100}, {}};
        for (int k = 0; k < 5; ++k) {
            d.ddc.push_back(u(rng));
        }
        const double tail = d_infin(d.ddc[4], d.ddc[3]);
        EXPECT_NEAR(ead(d), ead_by_quadrature(d, tail), 1e-6 * (1.0 + ead(d)));
    }
}

TEST(Ead, MonotoneInEveryDdcProperty)
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1e5);
    for (int trial = 0; trial < 100; ++trial) {
        DdcByPeriod d{{10, 20, 30, 50, 100}, {}};
        for (int k = 0; k < 5; ++k) {
            d.ddc.push_back(u(rng));
        }
        const double base = ead(d);
        for (int k = 0; k < 5; ++k) {
            auto e = d;
            e.ddc[k] += u(rng);
            EXPECT_GE(ead(e), base - 1e-9);
        }
    }
}

TEST(Ead, Validation)
{
    EXPECT_THROW(ead({{100.0}, {1.0}}), InputError);
    EXPECT_THROW(ead({{10.0, 10.0}, {1.0, 2.0}}), InputError);
    EXPECT_THROW(ead({{10.0, 20.0}, {1.0}}), InputError);
    EXPECT_THROW(ead({{10.0, 20.0}, {1.0, -2.0}}), InputError);
}

TEST(BenefitCost, Ratio)
{
    EXPECT_FALSE(benefit_cost(100.0, 50.0, 40.0, 0.0).has_value());
    EXPECT_DOUBLE_EQ(*benefit_cost(100.0, 50.0, 40.0, 1000.0), 2.0);
    EXPECT_LT(*benefit_cost(100.0, 120.0, 40.0, 1000.0), 0.0);
}
