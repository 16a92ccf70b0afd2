#include "bgiopt/pipeline.hpp"

#include "bgiopt/economics.hpp"
#include "bgiopt/errors.hpp"
#include "bgiopt/text.hpp"

#include <exception>
#include <limits>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace bgi {

DamageCurves load_damage_curves(const std::string& residential, const std::string& non_residential)
{
    DamageCurves curves;
    try {
        curves.residential = parse_damage_curve_csv(text::read_file(residential), BuildingCategory::residential);
    } catch (const ParseError& e) {
        throw InputError(residential + ": " + e.what());
    }
    try {
        curves.non_residential =
            parse_damage_curve_csv(text::read_file(non_residential), BuildingCategory::non_residential);
    } catch (const ParseError& e) {
        throw InputError(non_residential + ": " + e.what());
    }
    return curves;
}

Problem::Problem(RunConfig cfg)
    : Problem(cfg, load_catchment(cfg.catchment), load_damage_curves(cfg.residential_curve, cfg.non_residential_curve))
{
}

Problem::Problem(RunConfig cfg, Catchment catchment, DamageCurves curves)
    : cfg_(std::move(cfg)), catchment_(std::move(catchment))
{
    cfg_.validate();
    const auto curves_digest = digest(curves);
    flood_ = std::make_unique<FloodModel>(catchment_, cfg_.flood);
    risk_ = std::make_unique<RiskAssessor>(catchment_, std::move(curves));
    Sha256 h;
    h.str(digest(catchment_)).str(curves_digest).str(digest(cfg_.flood));
    digest_ = h.hex();
}

DesignStorm Problem::storm(double return_period, double uplift) const
{
    auto s = make_design_storm(return_period, cfg_.duration_min, cfg_.storm_steps, cfg_.ddf, cfg_.profile);
    if (uplift != 0.0) {
        s = apply_uplift(s, ClimateUplift{uplift});
    }
    return s;
}

double Problem::lcc(const Genome& g) const { return candidate_lcc(g, catchment_.zones, cfg_.costs); }

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& task)
{
    if (n == 0) {
        return;
    }
    const std::size_t threads = std::min(std::max<std::size_t>(workers, 1), n);
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            task(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                    next = n;
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

Evaluator::Evaluator(const Problem& problem, SimulationCache* cache, std::size_t workers)
    : problem_(&problem), cache_(cache), workers_(std::max<std::size_t>(workers, 1))
{
}

std::vector<Evaluation> Evaluator::evaluate(std::span<const Genome> genomes, const StormTarget& target)
{
    if (target.periods.empty()) {
        throw InputError("no return periods to evaluate");
    }
    const std::size_t n_storms = target.periods.size();
    std::vector<DesignStorm> storms;
    std::vector<std::string> storm_digests;
    for (const double t : target.periods) {
        storms.push_back(problem_->storm(t, target.uplift));
        storm_digests.push_back(digest(storms.back()));
    }

    struct Task {
        std::size_t genome;
        std::size_t storm;
        std::string key;
        double ddc = 0.0;
        std::string failure;
    };
    std::vector<Task> tasks;
    std::unordered_map<std::string, std::size_t> pending;
    // Each (genome, storm) slot holds either a cached value or a task index.
    std::vector<std::optional<double>> known(genomes.size() * n_storms);
    std::vector<std::size_t> slot_task(genomes.size() * n_storms, 0);
    for (std::size_t g = 0; g < genomes.size(); ++g) {
        if (genomes[g].size() != problem_->zone_count()) {
            throw InputError("genome length " + std::to_string(genomes[g].size()) + " does not match " +
                             std::to_string(problem_->zone_count()) + " zones");
        }
        for (std::size_t s = 0; s < n_storms; ++s) {
            const std::size_t slot = g * n_storms + s;
            auto key = cache_key(problem_->scenario_digest(), storm_digests[s], genomes[g]);
            if (const auto it = pending.find(key); it != pending.end()) {
                slot_task[slot] = it->second;
                continue;
            }
            if (cache_ != nullptr) {
                if (const auto hit = cache_->lookup(key)) {
                    known[slot] = *hit;
                    continue;
                }
            }
            pending.emplace(key, tasks.size());
            slot_task[slot] = tasks.size();
            tasks.push_back({g, s, std::move(key), 0.0, {}});
        }
    }

    parallel_for(tasks.size(), workers_, [&](std::size_t i) {
        auto& task = tasks[i];
        try {
            const auto field = problem_->flood().simulate(storms[task.storm], genomes[task.genome]);
            task.ddc = problem_->risk().total_ddc(field.max_depth);
        } catch (const NumericalFailure& e) {
            task.failure = e.what();
        }
        ++simulations_;
    });

    for (const auto& task : tasks) {
        if (!task.failure.empty()) {
            std::lock_guard lock(failures_mutex_);
            failures_.push_back(genomes[task.genome].to_hex() + " T=" + text::format_double(target.periods[task.storm]) +
                                ": " + task.failure);
        } else if (cache_ != nullptr) {
            cache_->insert(task.key, task.ddc);
        }
    }

    constexpr double worst = std::numeric_limits<double>::max();
    std::vector<Evaluation> out(genomes.size());
    for (std::size_t g = 0; g < genomes.size(); ++g) {
        auto& ev = out[g];
        std::vector<double> ddc(n_storms);
        for (std::size_t s = 0; s < n_storms; ++s) {
            const std::size_t slot = g * n_storms + s;
            if (known[slot]) {
                ddc[s] = *known[slot];
                continue;
            }
            const auto& task = tasks[slot_task[slot]];
            if (!task.failure.empty()) {
                ev.failed = true;
                ev.failure = task.failure;
            }
            ddc[s] = task.ddc;
        }
        if (ev.failed) {
            ev.objectives = {worst, worst};
            continue;
        }
        ev.objectives.lcc = problem_->lcc(genomes[g]);
        if (target.is_composite()) {
            ev.objectives.risk = ead({target.periods, ddc});
            ev.ddc_by_period = std::move(ddc);
        } else {
            ev.objectives.risk = ddc[0];
        }
    }
    return out;
}

Evaluation Evaluator::evaluate(const Genome& genome, const StormTarget& target)
{
    return evaluate(std::span<const Genome>(&genome, 1), target).front();
}

BatchEvaluator Evaluator::batch(StormTarget target)
{
    return [this, target = std::move(target)](std::span<const Genome> genomes) { return evaluate(genomes, target); };
}

DdcResult Evaluator::details(const Genome& genome, const DesignStorm& storm) const
{
    const auto field = problem_->flood().simulate(storm, genome);
    return problem_->risk().assess(field.max_depth);
}

std::vector<std::string> Evaluator::failures() const
{
    std::lock_guard lock(failures_mutex_);
    return failures_;
}

OptimizeResult optimize(const Problem& problem, Evaluator& evaluator, const StormTarget& target,
                        const GenerationCallback& on_generation)
{
    OptimizeResult r;
    r.front = run(problem.config().ga, problem.zone_count(), evaluator.batch(target), on_generation);
    if (target.is_composite()) {
        r.periods = target.periods;
    }
    r.contribution = zone_contribution(r.front);
    return r;
}

ParetoFront reevaluate(const ParetoFront& front, Evaluator& evaluator, const StormTarget& target)
{
    std::vector<Genome> genomes;
    genomes.reserve(front.size());
    for (const auto& ind : front) {
        genomes.push_back(ind.genome);
    }
    const auto evals = evaluator.evaluate(genomes, target);
    ParetoFront out;
    for (std::size_t i = 0; i < front.size(); ++i) {
        Individual ind;
        ind.genome = genomes[i];
        ind.eval = evals[i];
        out.push_back(std::move(ind));
    }
    return out;
}

RiskRange risk_range(const Problem& problem, Evaluator& evaluator, const StormTarget& target)
{
    const std::vector<Genome> ends{Genome(problem.zone_count(), false), Genome(problem.zone_count(), true)};
    const auto evals = evaluator.evaluate(ends, target);
    for (const auto& e : evals) {
        if (e.failed) {
            throw NumericalFailure("risk range simulation failed: " + e.failure);
        }
    }
    return {evals[0].objectives.risk, evals[1].objectives.risk};
}

FrontComparison compare_fronts(const FrontCurve& ref, const FrontCurve& trial, std::optional<RiskRange> range)
{
    FrontComparison c;
    c.rd = risk_differences(ref, trial);
    c.aupf_ref = aupf(ref);
    c.aupf_trial = aupf(trial);
    c.delta = delta_aupf(c.aupf_ref, c.aupf_trial);
    c.range = range;
    return c;
}

std::vector<MetricRow> metric_rows(const FrontComparison& cmp, std::optional<double> return_period)
{
    std::optional<double> max_pct;
    std::optional<double> med_pct;
    if (cmp.range) {
        max_pct = as_percent_of_range(cmp.rd.max_rd, *cmp.range);
        med_pct = as_percent_of_range(cmp.rd.med_rd, *cmp.range);
    }
    return {
        {"MaxRD", return_period, cmp.rd.max_rd, max_pct},
        {"MedRD", return_period, cmp.rd.med_rd, med_pct},
        {"AUPF_ref", return_period, cmp.aupf_ref, std::nullopt},
        {"AUPF_trial", return_period, cmp.aupf_trial, std::nullopt},
        {"dAUPF", return_period, cmp.delta.absolute, cmp.delta.percent},
    };
}

std::vector<StressRow> stress_test(const Problem& problem, const ParetoFront& front, Evaluator& evaluator,
                                   std::span<const double> uplifts)
{
    std::vector<double> levels{0.0};
    for (const double u : uplifts) {
        if (u != 0.0) {
            levels.push_back(u);
        }
    }
    const double lifespan = problem.config().costs.lifespan_years;
    std::vector<StressRow> rows;
    for (const double u : levels) {
        const auto target = StormTarget::composite(problem.config().return_periods, u);
        const auto base = evaluator.evaluate(Genome(problem.zone_count(), false), target);
        if (base.failed) {
            throw NumericalFailure("baseline simulation failed: " + base.failure);
        }
        const auto scored = reevaluate(front, evaluator, target);
        for (std::size_t i = 0; i < scored.size(); ++i) {
            const auto& o = scored[i].objectives();
            StressRow row{u, i, o.lcc, o.risk, std::nullopt};
            if (!scored[i].eval.failed) {
                row.benefit_cost = benefit_cost(base.objectives.risk, o.risk, lifespan, o.lcc);
            }
            rows.push_back(row);
        }
    }
    return rows;
}

namespace {

std::string bc_field(const std::optional<double>& bc) { return bc ? text::format_double(*bc) : "NA"; }

} // namespace

std::string write_stress_csv(std::span<const StressRow> rows)
{
    std::ostringstream out;
    out << "uplift,solution_id,lcc,ead,benefit_cost\n";
    for (const auto& r : rows) {
        out << text::format_double(r.uplift) << ',' << r.solution_id << ',' << text::format_double(r.lcc) << ','
            << text::format_double(r.ead) << ',' << bc_field(r.benefit_cost) << '\n';
    }
    return out.str();
}

std::vector<StressRow> benefit_cost_table(const FrontTable& front, double lifespan_years)
{
    const FrontRow* base = nullptr;
    for (const auto& row : front.rows) {
        if (row.lcc == 0.0) {
            base = &row;
            break;
        }
    }
    if (base == nullptr) {
        throw InputError("front has no zero-cost baseline solution");
    }
    std::vector<StressRow> rows;
    for (const auto& row : front.rows) {
        rows.push_back({0.0, row.solution_id, row.lcc, row.risk,
                        benefit_cost(base->risk, row.risk, lifespan_years, row.lcc)});
    }
    return rows;
}

std::string write_bca_csv(std::span<const StressRow> rows)
{
    std::ostringstream out;
    out << "solution_id,lcc,ead,benefit_cost\n";
    for (const auto& r : rows) {
        out << r.solution_id << ',' << text::format_double(r.lcc) << ',' << text::format_double(r.ead) << ','
            << bc_field(r.benefit_cost) << '\n';
    }
    return out.str();
}

} // namespace bgi
