#pragma once

#include "bgiopt/genome.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace bgi {

/// Seeded stream over std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Derived draws use only raw 64-bit outputs, so trajectories are
/// identical across standard libraries:
///   bit()       top bit of one output
///   uniform01() (x >> 11) * 2^-53
///   below(n)    rejection sampling: x < 2^64 mod n is redrawn, else x mod n
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    bool bit() { return (next() >> 63) != 0; }
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    std::size_t below(std::size_t n);

private:
    std::mt19937_64 engine_;
};

struct Objectives {
    double lcc = 0.0;
    double risk = 0.0;

    bool operator==(const Objectives&) const = default;
};

/// Minimisation: a <= b in both objectives and strictly better in one.
bool dominates(const Objectives& a, const Objectives& b);

struct Evaluation {
    Objectives objectives;
    std::vector<double> ddc_by_period; // composite runs only
    bool failed = false;
    std::string failure;
};

/// Evaluates a batch of genomes; results are returned in submission order.
using BatchEvaluator = std::function<std::vector<Evaluation>(std::span<const Genome>)>;

struct Individual {
    Genome genome;
    Evaluation eval;
    int rank = 0;
    double crowding = 0.0;

    const Objectives& objectives() const { return eval.objectives; }
};

struct GaConfig {
    std::size_t population = 20;
    std::size_t generations = 10;
    double crossover_rate = 0.9;
    std::optional<double> mutation_rate; // per gene; defaults to 1 / n_zones
    std::uint64_t seed = 1;

    void validate() const;
    double mutation_rate_for(std::size_t n_zones) const;
};

std::vector<std::vector<std::size_t>> fast_nondominated_sort(std::span<const Objectives> objectives);

/// Boundary points get +inf; interior points the sum over objectives of the
/// neighbour gap divided by the objective's range (zero-range objectives add 0).
std::vector<double> crowding_distance(std::span<const Objectives> front);

/// Individual 0 is all zeros, individual P-1 all ones, the rest uniform per gene.
std::vector<Genome> initialize_population(const GaConfig& cfg, std::size_t n_zones, Rng& rng);

class Nsga2 {
public:
    Nsga2(GaConfig cfg, std::size_t n_zones, BatchEvaluator evaluator);

    void initialize();
    /// One generation: tournament selection, uniform crossover, bit-flip
    /// mutation, evaluation and elitist truncation of parents + offspring.
    void evolve();

    std::size_t generation() const { return generation_; }
    const std::vector<Individual>& population() const { return population_; }
    std::span<const Individual> evaluated_offspring() const { return offspring_; }

    /// Rank-0 individuals with duplicate genomes removed, sorted by (lcc, risk).
    std::vector<Individual> front() const;

private:
    std::size_t tournament();
    std::vector<Individual> evaluate(std::vector<Genome> genomes);
    void assign_rank_and_crowding(std::vector<Individual>& pop);

    GaConfig cfg_;
    std::size_t n_zones_;
    BatchEvaluator evaluator_;
    Rng rng_;
    std::vector<Individual> population_;
    std::vector<Individual> offspring_;
    std::size_t generation_ = 0;
};

using ParetoFront = std::vector<Individual>;

/// Called after initialisation (generation 0) and after every generation.
using GenerationCallback = std::function<void(const Nsga2&)>;

ParetoFront run(const GaConfig& cfg, std::size_t n_zones, BatchEvaluator evaluator,
                const GenerationCallback& on_generation = {});

} // namespace bgi
