#include "snnevo/evolve.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace snnevo {

void speciate(const std::vector<Genome>& population, std::vector<Species>& species,
              const SpeciationConfig& config, int* next_species_id) {
    for (Species& s : species) s.members.clear();

    for (int i = 0; i < static_cast<int>(population.size()); ++i) {
        bool placed = false;
        for (Species& s : species) {
            if (compatibility_distance(population[i], s.representative, config.coefficients) <=
                config.threshold) {
                s.members.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) {
            Species s;
            s.id = (*next_species_id)++;
            s.representative = population[i];
            s.members.push_back(i);
            species.push_back(std::move(s));
        }
    }
    std::erase_if(species, [](const Species& s) { return s.members.empty(); });
}

std::vector<int> species_quotas(const std::vector<Species>& species,
                                const std::vector<double>& fitness, int total) {
    const std::size_t n = species.size();
    std::vector<int> quotas(n, 0);
    if (n == 0 || total <= 0) return quotas;

    std::vector<double> mean(n, 0.0);
    double mean_sum = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        double acc = 0.0;
        for (int i : species[s].members) acc += fitness[i];
        mean[s] = acc / static_cast<double>(species[s].members.size());
        mean_sum += mean[s];
    }

    std::vector<double> share(n, 0.0);
    if (mean_sum <= 0.0) {
        for (std::size_t s = 0; s < n; ++s) share[s] = static_cast<double>(total) / n;
    } else {
        for (std::size_t s = 0; s < n; ++s) share[s] = total * mean[s] / mean_sum;
    }

    // largest-remainder apportionment, deterministic tie-break by position
    int assigned = 0;
    std::vector<std::pair<double, std::size_t>> rema;
    for (std::size_t s = 0; s < n; ++s) {
        quotas[s] = static_cast<int>(share[s]);
        assigned += quotas[s];
        rema.push_back({share[s] - quotas[s], s});
    }
    std::stable_sort(rema.begin(), rema.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (int k = 0; assigned < total; ++k, ++assigned) quotas[rema[k % n].second]++;
    return quotas;
}

int tournament_select(const Species& s, const std::vector<double>& fitness, int k, Rng& rng) {
    int best = s.members[rng.index(s.members.size())];
    for (int i = 1; i < k; ++i) {
        const int cand = s.members[rng.index(s.members.size())];
        if (fitness[cand] > fitness[best]) best = cand;
    }
    return best;
}

void Champions::offer(const Genome& g, int generation, int index, const LifetimeReport& r) {
    const auto better = [](double v, const Entry& e, double have) {
        return !e.valid || v > have;
    };
    if (better(r.fitness, by_fitness, by_fitness.report.fitness))
        by_fitness = Entry{true, g, generation, index, r};
    if (better(r.accuracy, by_accuracy, by_accuracy.report.accuracy))
        by_accuracy = Entry{true, g, generation, index, r};
    if (better(r.eos_accuracy, by_eos, by_eos.report.eos_accuracy))
        by_eos = Entry{true, g, generation, index, r};
}

namespace {

void parallel_map(int n, int workers,
                  const std::function<void(int)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    const int count = std::min(workers, n);
    pool.reserve(count);
    for (int w = 0; w < count; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

struct MetricSummary {
    double mn = 0, mean = 0, mx = 0;
    int argmax = 0;
};

MetricSummary summarize(const std::vector<LifetimeReport>& reports,
                        double LifetimeReport::* field) {
    MetricSummary m;
    if (reports.empty()) return m;
    m.mn = m.mx = reports[0].*field;
    double sum = 0.0;
    for (int i = 0; i < static_cast<int>(reports.size()); ++i) {
        const double v = reports[i].*field;
        sum += v;
        if (v < m.mn) m.mn = v;
        if (v > m.mx) {
            m.mx = v;
            m.argmax = i;
        }
    }
    m.mean = sum / static_cast<double>(reports.size());
    return m;
}

} // namespace

EvolutionResult evolve(const EvolutionConfig& config, const EvalFn& evaluate,
                       const GenerationObserver& observer, InnovationRegistry* registry,
                       std::vector<Genome> initial_population, int start_generation) {
    if (config.population_size < 2) throw std::invalid_argument("population_size must be >= 2");
    if (config.elitism_fraction < 0.0 || config.elitism_fraction >= 1.0)
        throw std::invalid_argument("elitism_fraction must be in [0, 1)");

    InnovationRegistry local_registry;
    InnovationRegistry& reg = registry ? *registry : local_registry;

    std::vector<Genome> population = std::move(initial_population);
    if (population.empty()) {
        population.reserve(config.population_size);
        for (int i = 0; i < config.population_size; ++i) {
            Rng rng(derive_seed(config.master_seed, {0xA11CEULL, static_cast<std::uint64_t>(i)}));
            population.push_back(
                init_genome(config.n_inputs, config.n_outputs, reg, rng, config.mutation));
        }
    }
    if (static_cast<int>(population.size()) != config.population_size)
        throw std::invalid_argument("initial population size mismatch");

    EvolutionResult result;
    std::vector<Species> species;
    int next_species_id = 0;

    for (int gen = start_generation; gen < config.generations; ++gen) {
        std::vector<LifetimeReport> reports(population.size());
        parallel_map(static_cast<int>(population.size()), config.workers, [&](int i) {
            const std::uint64_t seed = derive_seed(
                config.master_seed,
                {0xE7A1ULL, static_cast<std::uint64_t>(gen), static_cast<std::uint64_t>(i)});
            reports[i] = evaluate(population[i], seed);
        });

        std::vector<double> fitness(population.size());
        for (std::size_t i = 0; i < population.size(); ++i) fitness[i] = reports[i].fitness;

        speciate(population, species, config.speciation, &next_species_id);

        const MetricSummary f = summarize(reports, &LifetimeReport::fitness);
        const MetricSummary a = summarize(reports, &LifetimeReport::accuracy);
        const MetricSummary e = summarize(reports, &LifetimeReport::eos_accuracy);
        GenerationStats stats;
        stats.generation = gen;
        stats.fitness_min = f.mn;
        stats.fitness_mean = f.mean;
        stats.fitness_max = f.mx;
        stats.acc_min = a.mn;
        stats.acc_mean = a.mean;
        stats.acc_max = a.mx;
        stats.eos_min = e.mn;
        stats.eos_mean = e.mean;
        stats.eos_max = e.mx;
        stats.species_count = static_cast<int>(species.size());
        stats.best_index = f.argmax;
        result.history.push_back(stats);

        for (std::size_t i = 0; i < population.size(); ++i)
            result.champions.offer(population[i], gen, static_cast<int>(i), reports[i]);

        if (observer) observer(stats, population, reports);

        // species bookkeeping: stagnation tracking
        for (Species& s : species) {
            double best = -1.0;
            for (int i : s.members) best = std::max(best, fitness[i]);
            if (best > s.best_fitness) {
                s.best_fitness = best;
                s.last_improved = gen;
            }
        }

        if (gen + 1 >= config.generations) break;

        Rng rng(derive_seed(config.master_seed, {0x5EEDD, static_cast<std::uint64_t>(gen)}));

        // global elitism: top fraction by fitness copied unchanged
        const int n_elites =
            static_cast<int>(config.elitism_fraction * config.population_size + 1e-9);
        std::vector<int> order(population.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int x, int y) { return fitness[x] > fitness[y]; });

        std::vector<Genome> next;
        next.reserve(config.population_size);
        for (int k = 0; k < n_elites; ++k) next.push_back(population[order[k]]);

        // cull stagnant species, always keeping the one holding the best genome
        std::vector<Species> breeding;
        for (Species& s : species) {
            const bool has_best =
                std::find(s.members.begin(), s.members.end(), order[0]) != s.members.end();
            const bool stagnant =
                gen - s.last_improved >= config.speciation.stagnation_generations;
            if (has_best || !stagnant) breeding.push_back(s);
        }
        if (breeding.empty()) breeding = species;

        const int n_offspring = config.population_size - n_elites;
        const std::vector<int> quotas = species_quotas(breeding, fitness, n_offspring);
        for (std::size_t s = 0; s < breeding.size(); ++s) {
            for (int k = 0; k < quotas[s]; ++k) {
                const int p1 = tournament_select(breeding[s], fitness, config.tournament_size, rng);
                const int p2 = tournament_select(breeding[s], fitness, config.tournament_size, rng);
                Genome child =
                    crossover(population[p1], population[p2], fitness[p1], fitness[p2], rng);
                next.push_back(mutate(child, reg, rng, config.mutation));
            }
        }

        // resample species representatives from this generation's members
        for (Species& s : species) s.representative = population[s.members[rng.index(s.members.size())]];

        population = std::move(next);
    }

    result.final_population = std::move(population);
    return result;
}

} // namespace snnevo
