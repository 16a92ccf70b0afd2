#include "bgiopt/nsga2.hpp"

#include "bgiopt/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

namespace bgi {

std::size_t Rng::below(std::size_t n)
{
    if (n == 0) {
        throw DomainError("Rng::below(0)");
    }
    const std::uint64_t bound = n;
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
        const std::uint64_t x = next();
        if (x >= threshold) {
            return static_cast<std::size_t>(x % bound);
        }
    }
}

bool dominates(const Objectives& a, const Objectives& b)
{
    return a.lcc <= b.lcc && a.risk <= b.risk && (a.lcc < b.lcc || a.risk < b.risk);
}

void GaConfig::validate() const
{
    if (population < 4 || population % 2 != 0) {
        throw ConfigError("population must be even and at least 4");
    }
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
        throw ConfigError("crossover_rate must lie in [0, 1]");
    }
    if (mutation_rate && !(*mutation_rate >= 0.0 && *mutation_rate <= 1.0)) {
        throw ConfigError("mutation_rate must lie in [0, 1]");
    }
}

double GaConfig::mutation_rate_for(std::size_t n_zones) const
{
    if (mutation_rate) {
        return *mutation_rate;
    }
    return n_zones == 0 ? 0.0 : 1.0 / static_cast<double>(n_zones);
}

std::vector<std::vector<std::size_t>> fast_nondominated_sort(std::span<const Objectives> objectives)
{
    const std::size_t n = objectives.size();
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<std::size_t> domination_count(n, 0);
    std::vector<std::vector<std::size_t>> fronts(1);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (dominates(objectives[p], objectives[q])) {
                dominated_by[p].push_back(q);
            } else if (dominates(objectives[q], objectives[p])) {
                ++domination_count[p];
            }
        }
        if (domination_count[p] == 0) {
            fronts[0].push_back(p);
        }
    }
    for (std::size_t k = 0; !fronts[k].empty(); ++k) {
        std::vector<std::size_t> next;
        for (const auto p : fronts[k]) {
            for (const auto q : dominated_by[p]) {
                if (--domination_count[q] == 0) {
                    next.push_back(q);
                }
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

std::vector<double> crowding_distance(std::span<const Objectives> front)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = front.size();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), inf);
        return dist;
    }
    std::vector<std::size_t> order(n);
    for (const auto member : {&Objectives::lcc, &Objectives::risk}) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return front[a].*member < front[b].*member; });
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        const double range = front[order.back()].*member - front[order.front()].*member;
        if (!(range > 0.0)) {
            continue;
        }
        for (std::size_t k = 1; k + 1 < n; ++k) {
            dist[order[k]] += (front[order[k + 1]].*member - front[order[k - 1]].*member) / range;
        }
    }
    return dist;
}

std::vector<Genome> initialize_population(const GaConfig& cfg, std::size_t n_zones, Rng& rng)
{
    cfg.validate();
    std::vector<Genome> pop;
    pop.reserve(cfg.population);
    pop.emplace_back(n_zones, false);
    for (std::size_t i = 1; i + 1 < cfg.population; ++i) {
        Genome g(n_zones);
        for (std::size_t j = 0; j < n_zones; ++j) {
            g.set(j, rng.bit());
        }
        pop.push_back(std::move(g));
    }
    pop.emplace_back(n_zones, true);
    return pop;
}

Nsga2::Nsga2(GaConfig cfg, std::size_t n_zones, BatchEvaluator evaluator)
    : cfg_(std::move(cfg)), n_zones_(n_zones), evaluator_(std::move(evaluator)), rng_(cfg_.seed)
{
    cfg_.validate();
    if (n_zones_ == 0) {
        throw ConfigError("at least one zone is required");
    }
}

std::vector<Individual> Nsga2::evaluate(std::vector<Genome> genomes)
{
    std::vector<Evaluation> evals;
    try {
        evals = evaluator_(genomes);
    } catch (const std::exception& e) {
        throw std::runtime_error("generation " + std::to_string(generation_) + ": evaluation failed: " + e.what());
    }
    if (evals.size() != genomes.size()) {
        throw std::runtime_error("generation " + std::to_string(generation_) +
                                 ": evaluator returned the wrong number of results");
    }
    std::vector<Individual> out(genomes.size());
    for (std::size_t i = 0; i < genomes.size(); ++i) {
        out[i].genome = std::move(genomes[i]);
        out[i].eval = std::move(evals[i]);
    }
    return out;
}

void Nsga2::assign_rank_and_crowding(std::vector<Individual>& pop)
{
    std::vector<Objectives> objs;
    objs.reserve(pop.size());
    for (const auto& ind : pop) {
        objs.push_back(ind.objectives());
    }
    const auto fronts = fast_nondominated_sort(objs);
    for (std::size_t k = 0; k < fronts.size(); ++k) {
        std::vector<Objectives> front_objs;
        for (const auto i : fronts[k]) {
            front_objs.push_back(objs[i]);
        }
        const auto dist = crowding_distance(front_objs);
        for (std::size_t m = 0; m < fronts[k].size(); ++m) {
            pop[fronts[k][m]].rank = static_cast<int>(k);
            pop[fronts[k][m]].crowding = dist[m];
        }
    }
}

void Nsga2::initialize()
{
    generation_ = 0;
    population_ = evaluate(initialize_population(cfg_, n_zones_, rng_));
    assign_rank_and_crowding(population_);
    offspring_.clear();
}

std::size_t Nsga2::tournament()
{
    const std::size_t a = rng_.below(population_.size());
    const std::size_t b = rng_.below(population_.size());
    const auto& x = population_[a];
    const auto& y = population_[b];
    if (y.rank < x.rank || (y.rank == x.rank && y.crowding > x.crowding)) {
        return b;
    }
    return a;
}

void Nsga2::evolve()
{
    if (population_.empty()) {
        throw std::logic_error("Nsga2::evolve called before initialize");
    }
    const double mutation = cfg_.mutation_rate_for(n_zones_);
    std::vector<Genome> children;
    children.reserve(cfg_.population);
    while (children.size() < cfg_.population) {
        Genome c1 = population_[tournament()].genome;
        Genome c2 = population_[tournament()].genome;
        if (rng_.uniform01() < cfg_.crossover_rate) {
            for (std::size_t j = 0; j < n_zones_; ++j) {
                if (rng_.bit()) {
                    const bool t = c1[j];
                    c1.set(j, c2[j]);
                    c2.set(j, t);
                }
            }
        }
        for (Genome* c : {&c1, &c2}) {
            for (std::size_t j = 0; j < n_zones_; ++j) {
                if (rng_.uniform01() < mutation) {
                    c->flip(j);
                }
            }
        }
        children.push_back(std::move(c1));
        children.push_back(std::move(c2));
    }

    ++generation_;
    offspring_ = evaluate(std::move(children));

    std::vector<Individual> merged = population_;
    merged.insert(merged.end(), offspring_.begin(), offspring_.end());
    assign_rank_and_crowding(merged);

    std::vector<std::size_t> order(merged.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (merged[a].rank != merged[b].rank) {
            return merged[a].rank < merged[b].rank;
        }
        return merged[a].crowding > merged[b].crowding;
    });
    std::vector<Individual> next;
    next.reserve(cfg_.population);
    for (std::size_t k = 0; k < cfg_.population; ++k) {
        next.push_back(std::move(merged[order[k]]));
    }
    population_ = std::move(next);
}

std::vector<Individual> Nsga2::front() const
{
    std::vector<Objectives> objs;
    for (const auto& ind : population_) {
        objs.push_back(ind.objectives());
    }
    const auto fronts = fast_nondominated_sort(objs);
    std::vector<Individual> out;
    std::set<Genome> seen;
    for (const auto i : fronts.front()) {
        if (seen.insert(population_[i].genome).second) {
            out.push_back(population_[i]);
            out.back().rank = 0;
        }
    }
    std::sort(out.begin(), out.end(), [](const Individual& a, const Individual& b) {
        if (a.objectives().lcc != b.objectives().lcc) {
            return a.objectives().lcc < b.objectives().lcc;
        }
        if (a.objectives().risk != b.objectives().risk) {
            return a.objectives().risk < b.objectives().risk;
        }
        return a.genome < b.genome;
    });
    return out;
}

ParetoFront run(const GaConfig& cfg, std::size_t n_zones, BatchEvaluator evaluator,
                const GenerationCallback& on_generation)
{
    Nsga2 ga(cfg, n_zones, std::move(evaluator));
    ga.initialize();
    if (on_generation) {
        on_generation(ga);
    }
    for (std::size_t g = 0; g < cfg.generations; ++g) {
        ga.evolve();
        if (on_generation) {
            on_generation(ga);
        }
    }
    return ga.front();
}

} // namespace bgi
