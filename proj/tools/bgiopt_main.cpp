#include "bgiopt/cache.hpp"
#include "bgiopt/config.hpp"
#include "bgiopt/errors.hpp"
#include "bgiopt/flood.hpp"
#include "bgiopt/front_io.hpp"
#include "bgiopt/pipeline.hpp"
#include "bgiopt/storm.hpp"
#include "bgiopt/text.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>

namespace fs = std::filesystem;
using namespace bgi;

namespace {

struct Common {
    std::string config;
    std::size_t workers = 0; // 0: use the config value
    bool no_cache = false;
    std::string output_dir;
};

RunConfig load_config(const Common& c)
{
    auto cfg = load_run_config(c.config);
    if (c.workers > 0) {
        cfg.workers = c.workers;
    }
    if (c.no_cache) {
        cfg.cache = false;
    }
    if (!c.output_dir.empty()) {
        cfg.output_dir = c.output_dir;
    }
    return cfg;
}

struct Session {
    std::unique_ptr<Problem> problem;
    std::unique_ptr<SimulationCache> cache;
    std::unique_ptr<Evaluator> evaluator;

    explicit Session(RunConfig cfg)
    {
        fs::create_directories(cfg.output_dir);
        const auto cache_file = fs::path(cfg.output_dir) / "cache.tsv";
        const bool use_cache = cfg.cache;
        const auto workers = cfg.workers;
        problem = std::make_unique<Problem>(std::move(cfg));
        for (const auto& w : problem->catchment().warnings) {
            std::cerr << "warning: " << w << '\n';
        }
        if (use_cache) {
            cache = std::make_unique<SimulationCache>(cache_file);
        }
        evaluator = std::make_unique<Evaluator>(*problem, cache.get(), workers);
    }

    fs::path out(const std::string& name) const { return fs::path(problem->config().output_dir) / name; }

    void report() const
    {
        std::cerr << "simulations: " << evaluator->simulations();
        if (cache) {
            std::cerr << ", cache hits: " << cache->hits() << ", cache entries: " << cache->size();
        }
        std::cerr << '\n';
        for (const auto& f : evaluator->failures()) {
            std::cerr << "failed simulation: " << f << '\n';
        }
    }
};

std::string period_label(double t) { return "T" + text::format_double(t); }

FrontTable read_front(const std::string& path)
{
    try {
        return parse_front_csv(text::read_file(path));
    } catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_out(const fs::path& p, const std::string& content)
{
    text::write_file(p.string(), content);
    std::cerr << "wrote " << p.string() << '\n';
}

int cmd_optimize(const Common& common, std::optional<double> period, bool composite, std::size_t snapshot_every,
                 bool building_details)
{
    Session s(load_config(common));
    const auto& cfg = s.problem->config();
    const auto target = composite ? StormTarget::composite(cfg.return_periods)
                                  : StormTarget::single(period.value_or(cfg.return_period));
    const std::string label = composite ? "composite" : period_label(target.periods[0]);

    GenerationCallback snapshot;
    if (snapshot_every > 0) {
        fs::create_directories(s.out("snapshots"));
        snapshot = [&](const Nsga2& ga) {
            if (ga.generation() % snapshot_every != 0) {
                return;
            }
            char name[64];
            std::snprintf(name, sizeof name, "%s_gen%04zu.csv", label.c_str(), ga.generation());
            const auto table = FrontTable::from_front(ga.front(), composite ? std::span<const double>(target.periods)
                                                                            : std::span<const double>());
            text::write_file((s.out("snapshots") / name).string(), write_front_csv(table));
        };
    }

    const auto result = optimize(*s.problem, *s.evaluator, target, snapshot);
    const auto table = FrontTable::from_front(result.front, result.periods);
    write_out(s.out("front_" + label + ".csv"), write_front_csv(table));
    write_out(s.out("zones_" + label + ".geojson"),
              write_zone_contribution_geojson(s.problem->catchment(), result.contribution));

    if (building_details) {
        for (std::size_t i = 0; i < result.front.size(); ++i) {
            for (const double t : target.periods) {
                const auto risks = s.evaluator->details(result.front[i].genome, s.problem->storm(t));
                const auto name = "buildings_" + label + "_s" + std::to_string(i) + "_" + period_label(t) + ".csv";
                text::write_file(s.out(name).string(), write_building_risk_csv(risks.buildings));
            }
        }
    }
    s.report();
    return 0;
}

int cmd_evaluate_front(const Common& common, const std::string& front_path, std::optional<double> under_period,
                       std::optional<double> under_uplift, const std::string& ref_path, const std::string& output)
{
    Session s(load_config(common));
    const auto& cfg = s.problem->config();
    const auto table = read_front(front_path);
    const auto front = table.to_front(s.problem->zone_count());

    StormTarget target;
    std::string label;
    if (under_period) {
        target = StormTarget::single(*under_period);
        label = period_label(*under_period);
    } else {
        // Composite fronts carry per-period columns and are rescored by EAD.
        target = table.periods.empty() ? StormTarget::single(cfg.return_period, *under_uplift)
                                       : StormTarget::composite(table.periods, *under_uplift);
        label = "u" + text::format_double(*under_uplift);
    }

    const auto scored = reevaluate(front, *s.evaluator, target);
    const auto out_table = FrontTable::from_front(scored, target.is_composite() ? std::span<const double>(target.periods)
                                                                                : std::span<const double>());
    write_out(output.empty() ? s.out("front_under_" + label + ".csv") : fs::path(output), write_front_csv(out_table));

    if (!ref_path.empty()) {
        const auto ref = read_front(ref_path);
        const auto range = risk_range(*s.problem, *s.evaluator, target);
        const auto cmp = compare_fronts(ref.curve("reference"), out_table.curve("trial"), range);
        std::optional<double> period;
        if (!target.is_composite()) {
            period = target.periods[0];
        }
        write_out(s.out("metrics_" + label + ".csv"), write_metrics_csv(metric_rows(cmp, period)));
    }
    s.report();
    return 0;
}

int cmd_stress_test(const Common& common, const std::string& front_path)
{
    Session s(load_config(common));
    const auto front = read_front(front_path).to_front(s.problem->zone_count());
    const auto rows = stress_test(*s.problem, front, *s.evaluator, s.problem->config().uplifts);
    write_out(s.out("stress_test.csv"), write_stress_csv(rows));
    s.report();
    return 0;
}

int cmd_metrics(const std::string& ref_path, const std::string& trial_path, std::optional<double> period)
{
    const auto ref = read_front(ref_path);
    const auto trial = read_front(trial_path);
    const auto ref_curve = ref.curve("reference");
    // Without simulations the reference front's own end points bound the range.
    const RiskRange range{ref_curve.points().front().risk, ref_curve.points().back().risk};
    std::optional<RiskRange> r;
    if (range.span() != 0.0) {
        r = range;
    }
    std::cout << write_metrics_csv(metric_rows(compare_fronts(ref_curve, trial.curve("trial"), r), period));
    return 0;
}

int cmd_bca(const std::string& front_path, const std::string& config, std::optional<int> lifespan)
{
    int years = CostParams{}.lifespan_years;
    if (!config.empty()) {
        years = load_run_config(config).costs.lifespan_years;
    }
    if (lifespan) {
        years = *lifespan;
    }
    if (years < 1) {
        throw ConfigError("lifespan must be at least one year");
    }
    std::cout << write_bca_csv(benefit_cost_table(read_front(front_path), years));
    return 0;
}

int cmd_design_storm(const std::string& config, double t, std::optional<double> duration, std::optional<int> steps,
                     double uplift)
{
    const auto cfg = load_run_config(config);
    auto storm = make_design_storm(t, duration.value_or(cfg.duration_min), steps.value_or(cfg.storm_steps), cfg.ddf,
                                   cfg.profile);
    if (uplift != 0.0) {
        storm = apply_uplift(storm, ClimateUplift{uplift});
    }
    std::cout << write_storm_csv(storm);
    return 0;
}

int cmd_simulate(const std::string& storm_path, const std::string& config, const std::string& zones_hex)
{
    const auto cfg = load_run_config(config);
    DesignStorm storm;
    try {
        storm = parse_storm_csv(text::read_file(storm_path));
    } catch (const ParseError& e) {
        throw InputError(storm_path + ": " + e.what());
    }
    const auto catchment = load_catchment(cfg.catchment);
    for (const auto& w : catchment.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    const auto genome = Genome::from_hex(zones_hex, catchment.zones.size());
    const auto field = simulate(catchment, storm, genome, cfg.flood);
    std::cout << write_ascii_grid(field.grid, field.max_depth);
    const auto& m = field.mass;
    std::cout << "mass_balance rain_in=" << text::format_double(m.rain_in)
              << " infiltrated=" << text::format_double(m.infiltrated) << " outflow=" << text::format_double(m.outflow)
              << " stored=" << text::format_double(m.stored)
              << " relative_error=" << text::format_double(mass_balance(field)) << '\n';
    return 0;
}

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--config", c.config, "run configuration file")->required()->check(CLI::ExistingFile);
    app->add_option("--workers", c.workers, "parallel simulations (overrides [run] workers)");
    app->add_flag("--no-cache", c.no_cache, "disable the simulation cache");
    app->add_option("--output-dir", c.output_dir, "output directory (overrides [paths] output_dir)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Permeable-surface flood intervention optimiser"};
    app.require_subcommand(1);

    Common common;

    auto* opt = app.add_subcommand("optimize", "search for cost/risk trade-offs");
    add_common(opt, common);
    std::optional<double> period;
    bool composite = false;
    std::size_t snapshot_every = 0;
    bool building_details = false;
    auto* period_opt = opt->add_option("--return-period", period, "optimise DDC for one return period");
    opt->add_flag("--composite", composite, "optimise expected annual damage")->excludes(period_opt);
    opt->add_option("--snapshot-every", snapshot_every, "write the current front every g generations");
    opt->add_flag("--building-details", building_details, "write per-building risk for the final front");

    auto* ev = app.add_subcommand("evaluate-front", "rescore a front under another storm");
    add_common(ev, common);
    std::string front_path;
    std::optional<double> under_period;
    std::optional<double> under_uplift;
    std::string ref_path;
    std::string output;
    ev->add_option("--front", front_path)->required()->check(CLI::ExistingFile);
    auto* up = ev->add_option("--under-period", under_period);
    auto* uu = ev->add_option("--under-uplift", under_uplift);
    up->excludes(uu);
    ev->add_option("--ref", ref_path, "reference front for robustness metrics")->check(CLI::ExistingFile);
    ev->add_option("--output", output, "rescored front CSV");

    auto* st = app.add_subcommand("stress-test", "EAD and benefit-cost under climate uplift");
    add_common(st, common);
    st->add_option("--front", front_path)->required()->check(CLI::ExistingFile);

    auto* me = app.add_subcommand("metrics", "compare two fronts");
    std::string trial_path;
    std::optional<double> metric_period;
    me->add_option("--ref", ref_path)->required()->check(CLI::ExistingFile);
    me->add_option("--trial", trial_path)->required()->check(CLI::ExistingFile);
    me->add_option("--return-period", metric_period, "return period recorded in the report");

    auto* bc = app.add_subcommand("bca", "benefit-cost ratios of an EAD front");
    std::string bca_config;
    std::optional<int> lifespan;
    bc->add_option("--front", front_path)->required()->check(CLI::ExistingFile);
    bc->add_option("--config", bca_config)->check(CLI::ExistingFile);
    bc->add_option("--lifespan", lifespan);

    auto* ds = app.add_subcommand("design-storm", "print a design hyetograph");
    std::string ds_config;
    double t = 0.0;
    std::optional<double> duration;
    std::optional<int> steps;
    double uplift = 0.0;
    ds->add_option("--config", ds_config)->required()->check(CLI::ExistingFile);
    ds->add_option("--T", t, "return period, years")->required();
    ds->add_option("--duration-min", duration);
    ds->add_option("--steps", steps);
    ds->add_option("--uplift", uplift);

    auto* sim = app.add_subcommand("simulate", "run one flood simulation");
    std::string storm_path;
    std::string catchment_config;
    std::string zones_hex;
    sim->add_option("--storm", storm_path)->required()->check(CLI::ExistingFile);
    sim->add_option("--catchment", catchment_config)->required()->check(CLI::ExistingFile);
    sim->add_option("--zones", zones_hex, "active zones as a hex bit mask")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        if (opt->parsed()) {
            return cmd_optimize(common, period, composite, snapshot_every, building_details);
        }
        if (ev->parsed()) {
            if (!under_period && !under_uplift) {
                throw ConfigError("evaluate-front needs --under-period or --under-uplift");
            }
            return cmd_evaluate_front(common, front_path, under_period, under_uplift, ref_path, output);
        }
        if (st->parsed()) {
            return cmd_stress_test(common, front_path);
        }
        if (me->parsed()) {
            return cmd_metrics(ref_path, trial_path, metric_period);
        }
        if (bc->parsed()) {
            return cmd_bca(front_path, bca_config, lifespan);
        }
        if (ds->parsed()) {
            return cmd_design_storm(ds_config, t, duration, steps, uplift);
        }
        if (sim->parsed()) {
            return cmd_simulate(storm_path, catchment_config, zones_hex);
        }
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
