#include "bgiopt/economics.hpp"
#include "bgiopt/errors.hpp"
#include "bgiopt/pipeline.hpp"
#include "bgiopt/text.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cfloat>
#include <cmath>
#include <random>
#include <set>

using namespace bgi;
using testing_util::building;
using testing_util::rect;
using testing_util::zone;

namespace {

// One 100 m bowl with four corner zones and four buildings between them and the centre.
RunConfig small_config()
{
    RunConfig cfg;
    cfg.ddf = {-0.025, 0.35, 0.3, 2.5};
    cfg.profile = {0.1, 0.8};
    cfg.duration_min = 30.0;
    cfg.storm_steps = 6;
    cfg.flood.settle_time = 60.0;
    cfg.flood.infil_permeable_active = 100.0;
    cfg.costs = {80.0, 1.5, 0.02, 3, 40};
    cfg.ga.population = 8;
    cfg.ga.generations = 3;
    cfg.ga.seed = 5;
    cfg.return_periods = {10, 50, 100};
    return cfg;
}

Catchment small_catchment()
{
    const auto dem = testing_util::make_raster(20, 20, 5.0, [](int r, int c) {
        const double x = (c + 0.5) / 10.0 - 1.0;
        const double y = (r + 0.5) / 10.0 - 1.0;
        return 20.0 + 0.7 * std::min(1.0, x * x + y * y);
    });
    std::vector<Building> bs;
    std::vector<ZoneShape> zs;
    const double w[4] = {20, 25, 30, 35};
    int k = 0;
    for (const double sx : {-1.0, 1.0}) {
        for (const double sy : {-1.0, 1.0}) {
            const double bx = 50.0 + sx * 12.0;
            const double by = 50.0 + sy * 12.0;
            bs.push_back(building("b" + std::to_string(k), BuildingCategory::residential,
                                  rect(bx - 6, by - 5, bx + 6, by + 5)));
            const double zx = sx < 0 ? 0.0 : 100.0 - w[k];
            const double zy = sy < 0 ? 0.0 : 100.0 - w[k];
            zs.push_back(zone(k + 1, rect(zx, zy, zx + w[k], zy + w[k])));
            ++k;
        }
    }
    return assemble_catchment(dem, {}, bs, zs);
}

struct Fixture {
    Problem problem{small_config(), small_catchment(), testing_util::fixture_curves()};
};

Fixture& fixture()
{
    static Fixture f;
    return f;
}

std::vector<Genome> all_genomes(std::size_t n)
{
    std::vector<Genome> out;
    for (std::uint64_t m = 0; m < (1ULL << n); ++m) {
        Genome g(n);
        for (std::size_t j = 0; j < n; ++j) {
            g.set(j, (m >> j) & 1U);
        }
        out.push_back(g);
    }
    return out;
}

} // namespace

TEST(ParallelFor, VisitsEveryIndexOnce)
{
    for (const std::size_t workers : {1U, 2U, 5U}) {
        std::vector<std::atomic<int>> hits(101);
        parallel_for(hits.size(), workers, [&](std::size_t i) { ++hits[i]; });
        for (const auto& h : hits) {
            EXPECT_EQ(h.load(), 1);
        }
    }
    parallel_for(0, 3, [](std::size_t) { FAIL(); });
}

TEST(ParallelFor, RethrowsTaskException)
{
    for (const std::size_t workers : {1U, 3U}) {
        EXPECT_THROW(parallel_for(50, workers,
                                  [](std::size_t i) {
                                      if (i == 17) {
                                          throw NumericalFailure("x");
                                      }
                                  }),
                     NumericalFailure);
    }
}

TEST(Problem, ExposesCatchmentAndCosts)
{
    const auto& p = fixture().problem;
    ASSERT_EQ(p.zone_count(), 4U);
    const Genome g = Genome::from_bits("1001");
    EXPECT_DOUBLE_EQ(p.lcc(g), candidate_lcc(g, p.catchment().zones, p.config().costs));
    EXPECT_EQ(p.scenario_digest().size(), 64U);
    const auto s = p.storm(100.0, 0.3);
    EXPECT_NEAR(s.total_depth_mm, 1.3 * p.storm(100.0).total_depth_mm, 1e-9);
    EXPECT_THROW(Problem(small_config(), small_catchment(), DamageCurves{}), ConfigError);
}

TEST(Evaluator, ResultsIndependentOfWorkerCount)
{
    const auto& p = fixture().problem;
    const auto genomes = all_genomes(4);
    Evaluator one(p, nullptr, 1);
    Evaluator three(p, nullptr, 3);
    const auto target = StormTarget::single(50.0);
    const auto a = one.evaluate(genomes, target);
    const auto b = three.evaluate(genomes, target);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].objectives, b[i].objectives) << i;
    }
    EXPECT_GT(a.front().objectives.risk, 0.0);
}

TEST(Evaluator, SingleRiskIsDdcOfSimulation)
{
    const auto& p = fixture().problem;
    Evaluator ev(p, nullptr, 1);
    const Genome g = Genome::from_bits("0110");
    const auto field = p.flood().simulate(p.storm(100.0), g);
    const auto direct = candidate_ddc(field, p.catchment(), testing_util::fixture_curves()).total;
    EXPECT_EQ(ev.evaluate(g, StormTarget::single(100.0)).objectives.risk, direct);
    EXPECT_EQ(ev.details(g, p.storm(100.0)).total, direct);
}

TEST(Evaluator, CompositeIsEadOfPerPeriodDdc)
{
    const auto& p = fixture().problem;
    Evaluator ev(p, nullptr, 2);
    const Genome g = Genome::from_bits("1000");
    const auto target = StormTarget::composite({10, 50, 100});
    const auto e = ev.evaluate(g, target);
    ASSERT_EQ(e.ddc_by_period.size(), 3U);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(e.ddc_by_period[k], ev.evaluate(g, StormTarget::single(target.periods[k])).objectives.risk);
    }
    EXPECT_EQ(e.objectives.risk, ead({target.periods, e.ddc_by_period}));
}

TEST(Evaluator, DeduplicatesAndCaches)
{
    const auto& p = fixture().problem;
    const auto dir = testing_util::fresh_dir("evaluator_cache");
    const auto file = dir / "cache.tsv";
    std::vector<Genome> batch{Genome::from_bits("1100"), Genome::from_bits("0011"), Genome::from_bits("1100")};
    const auto target = StormTarget::composite({10, 100});
    std::vector<Evaluation> first;
    {
        SimulationCache cache(file);
        Evaluator ev(p, &cache, 2);
        first = ev.evaluate(batch, target);
        EXPECT_EQ(ev.simulations(), 4U);
        EXPECT_EQ(cache.size(), 4U);
        const auto again = ev.evaluate(batch, target);
        EXPECT_EQ(ev.simulations(), 4U);
        EXPECT_EQ(again[1].objectives, first[1].objectives);
        EXPECT_EQ(first[0].objectives, first[2].objectives);
    }
    SimulationCache reloaded(file);
    Evaluator ev(p, &reloaded, 1);
    const auto third = ev.evaluate(batch, target);
    EXPECT_EQ(ev.simulations(), 0U);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        EXPECT_EQ(third[i].objectives, first[i].objectives);
        EXPECT_EQ(third[i].ddc_by_period, first[i].ddc_by_period);
    }
    // A different uplift is a different storm.
    ev.evaluate(batch[0], StormTarget::single(10.0, 0.15));
    EXPECT_EQ(ev.simulations(), 1U);
}

TEST(Evaluator, OneCacheEntryPerPeriod)
{
    const auto& p = fixture().problem;
    SimulationCache cache;
    Evaluator ev(p, &cache, 1);
    const auto e = ev.evaluate(Genome(4), StormTarget::composite({10, 20, 30, 50, 100}));
    EXPECT_EQ(cache.size(), 5U);
    EXPECT_EQ(e.objectives.lcc, 0.0);
    EXPECT_EQ(e.ddc_by_period.back(), ev.evaluate(Genome(4), StormTarget::single(100.0)).objectives.risk);
    EXPECT_EQ(ev.simulations(), 5U);
}

TEST(Optimize, CacheDoesNotChangeResults)
{
    const auto& p = fixture().problem;
    const auto target = StormTarget::composite(p.config().return_periods);
    SimulationCache cache;
    Evaluator cached(p, &cache, 1);
    Evaluator uncached(p, nullptr, 2);
    const auto a = write_front_csv(FrontTable::from_front(optimize(p, cached, target).front, target.periods));
    const auto b = write_front_csv(FrontTable::from_front(optimize(p, uncached, target).front, target.periods));
    EXPECT_EQ(a, b);
    EXPECT_GT(cache.hits(), 0U);
}

TEST(Evaluator, FailedSimulationGetsWorstCaseAndIsNotCached)
{
    const auto& p = fixture().problem;
    SimulationCache cache;
    Evaluator ev(p, &cache, 1);
    const auto e = ev.evaluate(Genome(4), StormTarget::single(10.0, 1e308));
    EXPECT_TRUE(e.failed);
    EXPECT_EQ(e.objectives.lcc, DBL_MAX);
    EXPECT_EQ(e.objectives.risk, DBL_MAX);
    EXPECT_EQ(cache.size(), 0U);
    ASSERT_EQ(ev.failures().size(), 1U);
    EXPECT_NE(ev.failures()[0].find("T=10"), std::string::npos);
    EXPECT_THROW(risk_range(p, ev, StormTarget::single(10.0, 1e308)), NumericalFailure);
}

TEST(Evaluator, RejectsBadInput)
{
    const auto& p = fixture().problem;
    Evaluator ev(p, nullptr, 1);
    EXPECT_THROW(ev.evaluate(Genome(3), StormTarget::single(10.0)), InputError);
    EXPECT_THROW(ev.evaluate(Genome(4), StormTarget{}), InputError);
}

TEST(Optimize, FrontLiesOnExhaustiveTrueFront)
{
    const auto& p = fixture().problem;
    SimulationCache cache;
    Evaluator ev(p, &cache, 2);
    const auto target = StormTarget::single(100.0);
    const auto all = all_genomes(4);
    const auto evals = ev.evaluate(all, target);
    std::set<std::pair<double, double>> truth;
    for (std::size_t i = 0; i < all.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < all.size(); ++j) {
            dominated = dominated || dominates(evals[j].objectives, evals[i].objectives);
        }
        if (!dominated) {
            truth.insert({evals[i].objectives.lcc, evals[i].objectives.risk});
        }
    }
    const auto sims = ev.simulations();
    std::size_t generations = 0;
    const auto r = optimize(p, ev, target, [&](const Nsga2&) { ++generations; });
    EXPECT_EQ(generations, p.config().ga.generations + 1);
    EXPECT_EQ(ev.simulations(), sims); // every genome was already cached
    EXPECT_TRUE(r.periods.empty());
    EXPECT_EQ(r.contribution.size(), 4U);
    for (const auto& ind : r.front) {
        EXPECT_EQ(truth.count({ind.objectives().lcc, ind.objectives().risk}), 1U) << ind.genome.to_hex();
    }
}

TEST(Optimize, CompositeCarriesPeriods)
{
    auto& p = fixture().problem;
    Evaluator ev(p, nullptr, 2);
    const auto r = optimize(p, ev, StormTarget::composite(p.config().return_periods));
    EXPECT_EQ(r.periods, p.config().return_periods);
    for (const auto& ind : r.front) {
        EXPECT_EQ(ind.eval.ddc_by_period.size(), 3U);
    }
    const auto table = FrontTable::from_front(r.front, r.periods);
    EXPECT_EQ(parse_front_csv(write_front_csv(table)).rows.size(), r.front.size());
}

TEST(Reevaluate, PreservesOrderAndGenomes)
{
    const auto& p = fixture().problem;
    Evaluator ev(p, nullptr, 1);
    ParetoFront f;
    for (const char* bits : {"1111", "0000", "0101"}) {
        Individual ind;
        ind.genome = Genome::from_bits(bits);
        f.push_back(ind);
    }
    const auto out = reevaluate(f, ev, StormTarget::single(10.0));
    ASSERT_EQ(out.size(), 3U);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(out[i].genome, f[i].genome);
        EXPECT_EQ(out[i].objectives(), ev.evaluate(f[i].genome, StormTarget::single(10.0)).objectives);
    }
    const auto rr = risk_range(p, ev, StormTarget::single(10.0));
    EXPECT_EQ(rr.baseline_ddc, out[1].objectives().risk);
    EXPECT_EQ(rr.max_intervention_ddc, out[0].objectives().risk);
}

TEST(StressTest, ControlFirstAndBaselinePerUplift)
{
    const auto& p = fixture().problem;
    Evaluator ev(p, nullptr, 2);
    ParetoFront f;
    for (const char* bits : {"0000", "1111"}) {
        Individual ind;
        ind.genome = Genome::from_bits(bits);
        f.push_back(ind);
    }
    const std::vector<double> levels{0.3};
    const auto rows = stress_test(p, f, ev, levels);
    ASSERT_EQ(rows.size(), 4U);
    EXPECT_EQ(rows[0].uplift, 0.0);
    EXPECT_EQ(rows[2].uplift, 0.3);
    EXPECT_FALSE(rows[0].benefit_cost.has_value());
    const auto target = StormTarget::composite(p.config().return_periods, 0.3);
    const double base = ev.evaluate(Genome(4), target).objectives.risk;
    const double full = ev.evaluate(Genome(4, true), target).objectives.risk;
    EXPECT_EQ(rows[2].ead, base);
    EXPECT_EQ(rows[3].ead, full);
    EXPECT_NEAR(*rows[3].benefit_cost, (base - full) * 40.0 / p.lcc(Genome(4, true)), 1e-12);
    EXPECT_GE(rows[2].ead, rows[0].ead);
    const auto csv = write_stress_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "uplift,solution_id,lcc,ead,benefit_cost");
    EXPECT_NE(csv.find(",NA\n"), std::string::npos);
}

TEST(BenefitCost, TableFromFront)
{
    const auto t = parse_front_csv("solution_id,lcc,risk,genome_hex\n0,0,1000,0\n1,400,800,1\n2,2000,900,3\n");
    const auto rows = benefit_cost_table(t, 40.0);
    ASSERT_EQ(rows.size(), 3U);
    EXPECT_FALSE(rows[0].benefit_cost);
    EXPECT_DOUBLE_EQ(*rows[1].benefit_cost, 20.0);
    EXPECT_DOUBLE_EQ(*rows[2].benefit_cost, 2.0);
    EXPECT_EQ(write_bca_csv(rows), "solution_id,lcc,ead,benefit_cost\n0,0,1000,NA\n1,400,800,20\n2,2000,900,2\n");
    EXPECT_THROW(benefit_cost_table(parse_front_csv("solution_id,lcc,risk,genome_hex\n0,5,1,1\n"), 40.0), InputError);
}

TEST(Compare, MetricRowsMatchPrimitives)
{
    const FrontCurve ref({{0, 100}, {10, 60}, {20, 30}});
    const FrontCurve trial({{0, 100}, {15, 50}, {20, 20}});
    const auto cmp = compare_fronts(ref, trial, RiskRange{100.0, 20.0});
    const auto rows = metric_rows(cmp, 100.0);
    ASSERT_EQ(rows.size(), 5U);
    EXPECT_EQ(rows[0].metric, "MaxRD");
    EXPECT_DOUBLE_EQ(rows[0].value, risk_differences(ref, trial).max_rd);
    EXPECT_DOUBLE_EQ(*rows[0].percent, 100.0 * rows[0].value / 80.0);
    EXPECT_DOUBLE_EQ(rows[2].value, aupf(ref));
    EXPECT_DOUBLE_EQ(rows[4].value, aupf(trial) - aupf(ref));
    EXPECT_FALSE(metric_rows(compare_fronts(ref, trial), std::nullopt)[0].percent.has_value());
}

TEST(Optimize, Small12FixtureMatchesExhaustiveEnumeration)
{
    const Problem p(load_run_config(std::string(BGI_FIXTURE_DIR) + "/small12/bgiopt.ini"));
    ASSERT_EQ(p.zone_count(), 12U);
    SimulationCache cache;
    Evaluator ev(p, &cache, 1);
    const auto target = StormTarget::single(100.0);
    const auto all = all_genomes(12);
    const auto evals = ev.evaluate(all, target);
    std::vector<Objectives> objs;
    for (const auto& e : evals) {
        ASSERT_FALSE(e.failed);
        objs.push_back(e.objectives);
    }
    std::set<std::pair<double, double>> truth;
    const auto fronts = fast_nondominated_sort(objs);
    for (const auto i : fronts.front()) {
        truth.insert({objs[i].lcc, objs[i].risk});
    }
    const auto r = optimize(p, ev, target);
    EXPECT_EQ(ev.simulations(), all.size());
    std::set<std::pair<double, double>> found;
    for (const auto& ind : r.front) {
        found.insert({ind.objectives().lcc, ind.objectives().risk});
    }
    EXPECT_EQ(r.front.front().objectives().lcc, 0.0);
    for (const auto& pt : found) {
        EXPECT_EQ(truth.count(pt), 1U) << pt.first << " " << pt.second;
    }
    EXPECT_GE(found.size() * 10, truth.size() * 9);
}
