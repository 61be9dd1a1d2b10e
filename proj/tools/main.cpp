#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "snnevo/harness.hpp"

namespace fs = std::filesystem;
using namespace snnevo;

namespace {

std::string default_run_dir(const RunConfig& config) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "runs/%s-%s-seed%llu", task_name(config.task),
                  config.profile.c_str(),
                  static_cast<unsigned long long>(config.evolution.master_seed));
    return buf;
}

int cmd_evolve(const std::string& task, const std::string& profile, std::uint64_t seed,
               const std::string& config_file, std::string out_dir, bool resume) {
    RunConfig config;
    try {
        const TaskId id = task_from_name(task);
        config = config_file.empty() ? default_config(id, profile)
                                     : load_config_file(config_file, id, profile);
        config.evolution.master_seed = seed;
        validate_config(config);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    if (out_dir.empty()) out_dir = default_run_dir(config);
    std::printf("task %s, profile %s, population %d, generations %d, seed %llu\n",
                task_name(config.task), config.profile.c_str(), config.evolution.population_size,
                config.evolution.generations,
                static_cast<unsigned long long>(config.evolution.master_seed));
    std::printf("run directory: %s\n", out_dir.c_str());

    const RunResult result = run_evolution(config, out_dir, resume);
    if (result.evolution.champions.by_fitness.valid) {
        const auto& best = result.evolution.champions.by_fitness;
        std::printf("best fitness %.6f (generation %d)\n", best.report.fitness, best.generation);
    }
    std::printf("wrote %s/stats.csv\n", out_dir.c_str());
    return 0;
}

int cmd_test(const std::string& champion_path, int sims, std::uint64_t seed,
             std::string out_file) {
    ChampionRecord champion = load_champion(champion_path);
    const TaskId task = task_from_name(champion.task);

    // test simulations run at the same scale the champion was evolved at;
    // the champion file does not carry the config, so use the profile that
    // matches a sibling manifest when present, else the desk profile
    std::string profile = "desk";
    const fs::path manifest = fs::path(champion_path).parent_path() / "manifest.json";
    RunConfig config;
    if (fs::exists(manifest)) {
        std::ifstream in(manifest);
        Json j = Json::parse(in);
        config = default_config(task, j.at("profile").get<std::string>());
        config_apply_json(config, j.at("config"));
    } else {
        config = default_config(task, profile);
    }

    const TestReport report = run_test_simulations(champion, config, sims, seed);
    const std::string csv = test_report_to_csv(report, config);
    if (out_file.empty()) {
        out_file = (fs::path(champion_path).parent_path() /
                    ("test_report_" + fs::path(champion_path).stem().string() + ".csv"))
                       .string();
    }
    std::ofstream out(out_file, std::ios::binary);
    out << csv;
    std::printf("%s", csv.c_str());
    std::printf("wrote %s\n", out_file.c_str());
    return 0;
}

int cmd_inspect(const std::string& champion_path, std::string dot_file) {
    ChampionRecord champion = load_champion(champion_path);
    std::printf("champion from task %s, generation %d\n", champion.task.c_str(),
                champion.generation);
    std::printf("training fitness %.6f, accuracy %.6f, eos accuracy %.6f\n", champion.fitness,
                champion.accuracy, champion.eos_accuracy);
    std::printf("%s", describe_genome(champion.genome).c_str());
    if (dot_file.empty())
        dot_file = fs::path(champion_path).replace_extension(".dot").string();
    std::ofstream out(dot_file, std::ios::binary);
    out << genome_to_dot(champion.genome);
    std::printf("wrote %s\n", dot_file.c_str());
    return 0;
}

int cmd_export_curves(const std::string& run_dir) {
    for (const std::string& f : export_curves(run_dir)) std::printf("wrote %s\n", f.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"snnevo: neuroevolution of plastic spiking networks in mutable environments"};
    app.require_subcommand(1);

    std::string task, profile = "paper", config_file, out_dir, champion_path, run_dir, out_file,
                dot_file;
    std::uint64_t seed = 0;
    int sims = 10;
    bool resume = false;

    CLI::App* evolve = app.add_subcommand("evolve", "run an evolution experiment");
    evolve->add_option("task", task, "food-foraging | logic-gate | cart-pole")->required();
    evolve->add_option("--profile", profile, "paper | desk")->default_str("paper");
    evolve->add_option("--seed", seed, "master seed");
    evolve->add_option("--config", config_file, "JSON config overriding the profile defaults");
    evolve->add_option("--out", out_dir, "run directory");
    evolve->add_flag("--resume", resume, "resume from the run directory's checkpoint");

    CLI::App* test = app.add_subcommand("test", "test simulations of a champion");
    test->add_option("champion", champion_path, "champion JSON file")->required();
    test->add_option("--sims", sims, "number of test simulations");
    test->add_option("--seed", seed, "test seed");
    test->add_option("--out", out_file, "output CSV path");

    CLI::App* inspect = app.add_subcommand("inspect", "describe a champion's topology");
    inspect->add_option("champion", champion_path, "champion JSON file")->required();
    inspect->add_option("--dot", dot_file, "graph description output path");

    CLI::App* curves = app.add_subcommand("export-curves", "per-metric plot data from a run");
    curves->add_option("run_dir", run_dir, "run directory containing stats.csv")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (evolve->parsed())
            return cmd_evolve(task, profile, seed, config_file, out_dir, resume);
        if (test->parsed()) return cmd_test(champion_path, sims, seed, out_file);
        if (inspect->parsed()) return cmd_inspect(champion_path, dot_file);
        if (curves->parsed()) return cmd_export_curves(run_dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
