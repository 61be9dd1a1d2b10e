#ifndef SNNEVO_HARNESS_HPP
#define SNNEVO_HARNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "snnevo/config.hpp"

namespace snnevo {

inline constexpr const char* kCodeVersion = "0.1.0";
inline constexpr const char* kStatsCsvHeader =
    "generation,fitness_min,fitness_mean,fitness_max,acc_min,acc_mean,acc_max,"
    "eos_min,eos_mean,eos_max,species_count";

/// Per-(genome, seed) evaluation for a task. Weights, schedule order and
/// physics resets all derive from the seed.
EvalFn make_eval_fn(const RunConfig& config);

/// Evaluate a genome the way test simulations do: fresh weights, randomized
/// orders, and the held-out condition set for logic and cart-pole.
LifetimeReport run_test_simulation(const Genome& g, const RunConfig& config, std::uint64_t seed);

struct RunResult {
    std::string run_dir;
    EvolutionResult evolution;
};

/// Full evolution run: writes manifest.json, stats.csv, champion files and
/// periodic checkpoints into run_dir. Resumes from run_dir/checkpoint.json
/// when `resume` is set.
RunResult run_evolution(const RunConfig& config, const std::string& run_dir, bool resume = false,
                        bool quiet = false);

struct TestSimRow {
    int index = 0;
    LifetimeReport report;
};

struct TestReport {
    std::vector<TestSimRow> rows;
    double mean_fitness = 0.0;
    double mean_accuracy = 0.0;
    double mean_eos = 0.0;
    std::vector<double> mean_condition_steps;  // cart-pole: per test size
};

TestReport run_test_simulations(const ChampionRecord& champion, const RunConfig& config,
                                int n_sims, std::uint64_t seed);

/// CSV mirroring the result tables: per-simulation rows plus an average row.
std::string test_report_to_csv(const TestReport& report, const RunConfig& config);

/// Human-readable topology listing of a champion genome.
std::string describe_genome(const Genome& g);
/// Graphviz DOT form of the topology, for external renderers.
std::string genome_to_dot(const Genome& g);

/// Read run_dir/stats.csv and write per-metric curve files
/// (generation,min,mean,max). Returns the written file names.
std::vector<std::string> export_curves(const std::string& run_dir);

std::string format_double(double v);

} // namespace snnevo

#endif
