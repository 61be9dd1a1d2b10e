#ifndef SNNEVO_EVOLVE_HPP
#define SNNEVO_EVOLVE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "snnevo/env.hpp"
#include "snnevo/genome.hpp"

namespace snnevo {

struct SpeciationConfig {
    DistanceCoefficients coefficients;
    double threshold = 3.0;
    int stagnation_generations = 20;
    bool per_species_elitism = false;
};

struct EvolutionConfig {
    int population_size = 100;
    int generations = 1000;
    double elitism_fraction = 0.10;
    int tournament_size = 3;
    int n_inputs = 4;
    int n_outputs = 2;
    SpeciationConfig speciation;
    MutationConfig mutation;
    std::uint64_t master_seed = 0;
    int workers = 1;  // evaluation fan-out; results join by index either way
};

struct GenerationStats {
    int generation = 0;
    double fitness_min = 0, fitness_mean = 0, fitness_max = 0;
    double acc_min = 0, acc_mean = 0, acc_max = 0;
    double eos_min = 0, eos_mean = 0, eos_max = 0;
    int species_count = 0;
    int best_index = 0;
};

struct Species {
    int id = 0;
    Genome representative;
    std::vector<int> members;  // indices into the current population
    double best_fitness = -1.0;
    int last_improved = 0;
};

/// Assign each genome to the first species whose representative is within
/// threshold; unmatched genomes found new species. Empty species are dropped.
void speciate(const std::vector<Genome>& population, std::vector<Species>& species,
              const SpeciationConfig& config, int* next_species_id);

/// Offspring quotas proportional to species mean fitness, summing to total.
std::vector<int> species_quotas(const std::vector<Species>& species,
                                const std::vector<double>& fitness, int total);

/// Tournament pick inside one species: best of k draws, ties keep the
/// earlier draw.
int tournament_select(const Species& s, const std::vector<double>& fitness, int k, Rng& rng);

/// Best-ever genomes by each training metric.
struct Champions {
    struct Entry {
        bool valid = false;
        Genome genome;
        int generation = -1;
        int index = -1;
        LifetimeReport report;
    };
    Entry by_fitness;
    Entry by_accuracy;
    Entry by_eos;

    void offer(const Genome& g, int generation, int index, const LifetimeReport& r);
};

using EvalFn = std::function<LifetimeReport(const Genome&, std::uint64_t seed)>;

/// Called once per generation after evaluation; used for logging and
/// checkpointing. Population and reports are the evaluated generation.
using GenerationObserver = std::function<void(const GenerationStats&, const std::vector<Genome>&,
                                              const std::vector<LifetimeReport>&)>;

struct EvolutionResult {
    std::vector<GenerationStats> history;
    Champions champions;
    std::vector<Genome> final_population;
};

/// Generational loop: evaluate, log, speciate, elitist reproduction.
/// Deterministic for a fixed master seed: per-individual evaluation seeds are
/// derived from (master_seed, generation, index) and never from shared state.
EvolutionResult evolve(const EvolutionConfig& config, const EvalFn& evaluate,
                       const GenerationObserver& observer = {},
                       InnovationRegistry* registry = nullptr,
                       std::vector<Genome> initial_population = {}, int start_generation = 0);

} // namespace snnevo

#endif
