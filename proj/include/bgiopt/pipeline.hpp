#pragma once

#include "bgiopt/cache.hpp"
#include "bgiopt/catchment.hpp"
#include "bgiopt/config.hpp"
#include "bgiopt/flood.hpp"
#include "bgiopt/front_io.hpp"
#include "bgiopt/front_metrics.hpp"
#include "bgiopt/nsga2.hpp"
#include "bgiopt/risk.hpp"

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bgi {

DamageCurves load_damage_curves(const std::string& residential, const std::string& non_residential);

/// Loaded inputs shared by every evaluation. Not copyable: the flood model and
/// risk assessor refer to the owned catchment.
class Problem {
public:
    explicit Problem(RunConfig cfg);
    Problem(RunConfig cfg, Catchment catchment, DamageCurves curves);
    Problem(const Problem&) = delete;
    Problem& operator=(const Problem&) = delete;

    const RunConfig& config() const { return cfg_; }
    const Catchment& catchment() const { return catchment_; }
    const FloodModel& flood() const { return *flood_; }
    const RiskAssessor& risk() const { return *risk_; }
    std::size_t zone_count() const { return catchment_.zones.size(); }
    /// Catchment, damage curves and flood parameters.
    const std::string& scenario_digest() const { return digest_; }

    DesignStorm storm(double return_period, double uplift = 0.0) const;
    double lcc(const Genome& g) const;

private:
    RunConfig cfg_;
    Catchment catchment_;
    std::unique_ptr<FloodModel> flood_;
    std::unique_ptr<RiskAssessor> risk_;
    std::string digest_;
};

/// One return period scores DDC; several score EAD over them.
struct StormTarget {
    std::vector<double> periods;
    double uplift = 0.0;

    static StormTarget single(double period, double uplift = 0.0) { return {{period}, uplift}; }
    static StormTarget composite(std::vector<double> periods, double uplift = 0.0) { return {std::move(periods), uplift}; }
    bool is_composite() const { return periods.size() > 1; }
};

/// Runs (genome, storm) simulations on a bounded worker pool, deduplicated
/// within a batch and memoised in the cache. Results come back in submission
/// order whatever the completion order.
class Evaluator {
public:
    Evaluator(const Problem& problem, SimulationCache* cache, std::size_t workers);

    /// A genome whose simulation fails gets worst-case objectives and is flagged.
    std::vector<Evaluation> evaluate(std::span<const Genome> genomes, const StormTarget& target);
    Evaluation evaluate(const Genome& genome, const StormTarget& target);
    BatchEvaluator batch(StormTarget target);

    /// Per-building risk for one genome; always simulates.
    DdcResult details(const Genome& genome, const DesignStorm& storm) const;

    std::size_t simulations() const { return simulations_; }
    std::vector<std::string> failures() const;

private:
    const Problem* problem_;
    SimulationCache* cache_;
    std::size_t workers_;
    std::atomic<std::size_t> simulations_{0};
    mutable std::mutex failures_mutex_;
    std::vector<std::string> failures_;
};

/// Calls `task(i)` for i in [0, n) on up to `workers` threads. The first
/// exception thrown by any task is rethrown after all threads join.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& task);

struct OptimizeResult {
    ParetoFront front;
    std::vector<double> periods; // per-period DDC columns, composite runs only
    std::vector<double> contribution;
};

OptimizeResult optimize(const Problem& problem, Evaluator& evaluator, const StormTarget& target,
                        const GenerationCallback& on_generation = {});

/// Same genomes, objectives recomputed under `target`; order preserved.
ParetoFront reevaluate(const ParetoFront& front, Evaluator& evaluator, const StormTarget& target);

/// Risk of the all-zeros and all-ones genomes under `target`.
RiskRange risk_range(const Problem& problem, Evaluator& evaluator, const StormTarget& target);

struct FrontComparison {
    RiskDifferences rd;
    double aupf_ref = 0.0;
    double aupf_trial = 0.0;
    DeltaAupf delta;
    std::optional<RiskRange> range;
};

FrontComparison compare_fronts(const FrontCurve& ref, const FrontCurve& trial, std::optional<RiskRange> range = {});
std::vector<MetricRow> metric_rows(const FrontComparison& cmp, std::optional<double> return_period);

struct StressRow {
    double uplift = 0.0;
    std::size_t solution_id = 0;
    double lcc = 0.0;
    double ead = 0.0;
    std::optional<double> benefit_cost;
};

/// EAD and benefit-cost of every front solution under each uplift, with an
/// unscaled control (u = 0) first. Benefits are measured against the all-zeros
/// genome under the same uplift.
std::vector<StressRow> stress_test(const Problem& problem, const ParetoFront& front, Evaluator& evaluator,
                                   std::span<const double> uplifts);
std::string write_stress_csv(std::span<const StressRow> rows);

/// Benefit-cost from a front whose risk column is EAD; requires the lcc 0 baseline row.
std::vector<StressRow> benefit_cost_table(const FrontTable& front, double lifespan_years);
std::string write_bca_csv(std::span<const StressRow> rows);

} // namespace bgi
