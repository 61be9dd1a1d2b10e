#include "snnevo/harness.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace snnevo {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

EvalFn make_eval_fn(const RunConfig& config) {
    const RunConfig cfg = config;  // by value: the closure outlives the caller's copy
    if (task_is_binary(cfg.task)) {
        const BinaryEnv::Task env_task = cfg.task == TaskId::food_foraging
                                             ? BinaryEnv::Task::food
                                             : BinaryEnv::Task::logic_train;
        return [cfg, env_task](const Genome& g, std::uint64_t seed) {
            Rng weight_rng(derive_seed(seed, {1}));
            Network net = develop(g, weight_rng, cfg.sim);
            BinaryEnv env(env_task, cfg.env, derive_seed(seed, {2}));
            return run_lifetime(net, env, cfg.sim, derive_seed(seed, {3}));
        };
    }
    return [cfg](const Genome& g, std::uint64_t seed) {
        Rng weight_rng(derive_seed(seed, {1}));
        Network net = develop(g, weight_rng, cfg.sim);
        return run_cartpole_lifetime(net, cfg.cartpole, CartPoleMode::train,
                                     derive_seed(seed, {2}));
    };
}

LifetimeReport run_test_simulation(const Genome& g, const RunConfig& config, std::uint64_t seed) {
    Rng weight_rng(derive_seed(seed, {1}));
    Network net = develop(g, weight_rng, config.sim);
    if (config.task == TaskId::cart_pole) {
        return run_cartpole_lifetime(net, config.cartpole, CartPoleMode::test,
                                     derive_seed(seed, {2}));
    }
    BinaryEnvConfig env_cfg = config.env;
    env_cfg.randomize_condition_order = true;
    const BinaryEnv::Task env_task = config.task == TaskId::food_foraging
                                         ? BinaryEnv::Task::food
                                         : BinaryEnv::Task::logic_test;
    BinaryEnv env(env_task, env_cfg, derive_seed(seed, {2}));
    return run_lifetime(net, env, config.sim, derive_seed(seed, {3}));
}

namespace {

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string stats_row(const GenerationStats& s) {
    std::ostringstream os;
    os << s.generation << ',' << format_double(s.fitness_min) << ','
       << format_double(s.fitness_mean) << ',' << format_double(s.fitness_max) << ','
       << format_double(s.acc_min) << ',' << format_double(s.acc_mean) << ','
       << format_double(s.acc_max) << ',' << format_double(s.eos_min) << ','
       << format_double(s.eos_mean) << ',' << format_double(s.eos_max) << ','
       << s.species_count;
    return os.str();
}

void write_manifest(const RunConfig& config, const std::string& run_dir) {
    Json j;
    j["task"] = task_name(config.task);
    j["profile"] = config.profile;
    j["master_seed"] = config.evolution.master_seed;
    j["code_version"] = kCodeVersion;
    const auto now = std::chrono::system_clock::now();
    j["created_unix_time"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    j["config"] = config_to_json(config);
    std::ofstream out(run_dir + "/manifest.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest in " + run_dir);
    out << j.dump(2) << "\n";
}

ChampionRecord to_record(const RunConfig& config, const Champions::Entry& e) {
    ChampionRecord r;
    r.task = task_name(config.task);
    r.generation = e.generation;
    r.fitness = e.report.fitness;
    r.accuracy = e.report.accuracy;
    r.eos_accuracy = e.report.eos_accuracy;
    r.genome = e.genome;
    return r;
}

void save_champions(const RunConfig& config, const Champions& champions,
                    const std::string& run_dir) {
    if (champions.by_fitness.valid)
        save_champion(to_record(config, champions.by_fitness), run_dir + "/champion_fitness.json");
    if (task_is_binary(config.task)) {
        if (champions.by_accuracy.valid)
            save_champion(to_record(config, champions.by_accuracy),
                          run_dir + "/champion_accuracy.json");
        if (champions.by_eos.valid)
            save_champion(to_record(config, champions.by_eos),
                          run_dir + "/champion_eos_accuracy.json");
    }
}

struct Checkpoint {
    int next_generation = 0;
    std::vector<Genome> population;
};

void save_checkpoint(int next_generation,
                     const std::vector<Genome>& population, const InnovationRegistry& reg,
                     const Champions& champions, const std::vector<std::string>& stats_rows,
                     const std::string& run_dir) {
    Json j;
    j["format_version"] = 1;
    j["next_generation"] = next_generation;
    Json pop = Json::array();
    for (const Genome& g : population) pop.push_back(genome_to_json(g));
    j["population"] = pop;
    j["registry"] = registry_to_json(reg);
    Json ch;
    const auto put = [&](const char* key, const Champions::Entry& e) {
        if (!e.valid) return;
        Json je;
        je["generation"] = e.generation;
        je["fitness"] = e.report.fitness;
        je["accuracy"] = e.report.accuracy;
        je["eos_accuracy"] = e.report.eos_accuracy;
        je["genome"] = genome_to_json(e.genome);
        ch[key] = je;
    };
    put("by_fitness", champions.by_fitness);
    put("by_accuracy", champions.by_accuracy);
    put("by_eos", champions.by_eos);
    j["champions"] = ch;
    j["stats_rows"] = stats_rows;
    const std::string tmp = run_dir + "/checkpoint.json.tmp";
    std::ofstream out(tmp, std::ios::binary);
    out << j.dump() << "\n";
    out.close();
    fs::rename(tmp, run_dir + "/checkpoint.json");
}

bool load_checkpoint(const std::string& run_dir, Checkpoint& cp, InnovationRegistry& reg,
                     Champions& champions, std::vector<std::string>& stats_rows) {
    std::ifstream in(run_dir + "/checkpoint.json", std::ios::binary);
    if (!in) return false;
    Json j = Json::parse(in);
    cp.next_generation = j.at("next_generation").get<int>();
    for (const Json& jg : j.at("population")) cp.population.push_back(genome_from_json(jg));
    registry_from_json(j.at("registry"), reg);
    const auto get = [&](const char* key, Champions::Entry& e) {
        if (!j.at("champions").contains(key)) return;
        const Json& je = j.at("champions").at(key);
        e.valid = true;
        e.generation = je.at("generation").get<int>();
        e.report.fitness = je.at("fitness").get<double>();
        e.report.accuracy = je.at("accuracy").get<double>();
        e.report.eos_accuracy = je.at("eos_accuracy").get<double>();
        e.genome = genome_from_json(je.at("genome"));
    };
    get("by_fitness", champions.by_fitness);
    get("by_accuracy", champions.by_accuracy);
    get("by_eos", champions.by_eos);
    // the resumed generation is re-evaluated, so drop rows at or past it
    for (const Json& row : j.at("stats_rows")) {
        const std::string s = row.get<std::string>();
        if (std::stoi(s.substr(0, s.find(','))) < cp.next_generation) stats_rows.push_back(s);
    }
    return true;
}

} // namespace

RunResult run_evolution(const RunConfig& config, const std::string& run_dir, bool resume,
                        bool quiet) {
    validate_config(config);
    fs::create_directories(run_dir);
    write_manifest(config, run_dir);

    InnovationRegistry registry;
    Champions champions;
    std::vector<std::string> stats_rows;
    Checkpoint cp;
    bool resumed = false;
    if (resume) {
        resumed = load_checkpoint(run_dir, cp, registry, champions, stats_rows);
        if (!quiet && resumed)
            std::printf("resuming %s at generation %d\n", run_dir.c_str(), cp.next_generation);
    }

    const EvalFn eval = make_eval_fn(config);

    EvolutionResult partial;
    partial.champions = champions;
    EvolutionConfig evo = config.evolution;

    std::vector<std::string>& rows = stats_rows;
    const GenerationObserver observer = [&](const GenerationStats& stats,
                                            const std::vector<Genome>& population,
                                            const std::vector<LifetimeReport>&) {
        rows.push_back(stats_row(stats));
        if (!quiet && (stats.generation % 10 == 0 || stats.generation + 1 == evo.generations)) {
            std::printf("gen %4d  fitness %.4f/%.4f/%.4f  acc max %.4f  species %d\n",
                        stats.generation, stats.fitness_min, stats.fitness_mean,
                        stats.fitness_max, stats.acc_max, stats.species_count);
            std::fflush(stdout);
        }
        if (config.checkpoint_every > 0 && (stats.generation + 1) % config.checkpoint_every == 0 &&
            stats.generation + 1 < evo.generations) {
            // note: the population snapshot is the evaluated one; reproduction
            // replays deterministically from (seed, generation)
            save_checkpoint(stats.generation, population, registry, partial.champions,
                            rows, run_dir);
        }
    };

    // champions accumulate inside evolve's own archive; wrap eval to keep the
    // observer checkpoint in sync
    EvolutionResult result =
        evolve(evo, eval, [&](const GenerationStats& s, const std::vector<Genome>& p,
                              const std::vector<LifetimeReport>& r) {
            for (std::size_t i = 0; i < p.size(); ++i)
                partial.champions.offer(p[i], s.generation, static_cast<int>(i), r[i]);
            observer(s, p, r);
        },
        &registry, resumed ? std::move(cp.population) : std::vector<Genome>{},
        resumed ? cp.next_generation : 0);

    // merge pre-resume champions with the fresh archive
    if (result.champions.by_fitness.valid)
        partial.champions.offer(result.champions.by_fitness.genome,
                                result.champions.by_fitness.generation,
                                result.champions.by_fitness.index,
                                result.champions.by_fitness.report);
    if (result.champions.by_accuracy.valid)
        partial.champions.offer(result.champions.by_accuracy.genome,
                                result.champions.by_accuracy.generation,
                                result.champions.by_accuracy.index,
                                result.champions.by_accuracy.report);
    if (result.champions.by_eos.valid)
        partial.champions.offer(result.champions.by_eos.genome,
                                result.champions.by_eos.generation,
                                result.champions.by_eos.index, result.champions.by_eos.report);
    result.champions = partial.champions;

    std::ofstream out(run_dir + "/stats.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write stats.csv in " + run_dir);
    out << kStatsCsvHeader << "\n";
    for (const std::string& row : stats_rows) out << row << "\n";
    out.close();

    save_champions(config, result.champions, run_dir);
    save_checkpoint(config.evolution.generations, result.final_population, registry,
                    result.champions, stats_rows, run_dir);

    return RunResult{run_dir, std::move(result)};
}

TestReport run_test_simulations(const ChampionRecord& champion, const RunConfig& config,
                                int n_sims, std::uint64_t seed) {
    TestReport report;
    double fit = 0, acc = 0, eos = 0;
    std::vector<double> cond_steps;
    for (int i = 0; i < n_sims; ++i) {
        const std::uint64_t sim_seed =
            derive_seed(seed, {0x7E57ULL, static_cast<std::uint64_t>(i)});
        TestSimRow row;
        row.index = i + 1;
        row.report = run_test_simulation(champion.genome, config, sim_seed);
        fit += row.report.fitness;
        acc += row.report.accuracy;
        eos += row.report.eos_accuracy;
        if (cond_steps.size() < row.report.condition_steps.size())
            cond_steps.resize(row.report.condition_steps.size(), 0.0);
        for (std::size_t k = 0; k < row.report.condition_steps.size(); ++k)
            cond_steps[k] += static_cast<double>(row.report.condition_steps[k]);
        report.rows.push_back(std::move(row));
    }
    if (n_sims > 0) {
        report.mean_fitness = fit / n_sims;
        report.mean_accuracy = acc / n_sims;
        report.mean_eos = eos / n_sims;
        for (double v : cond_steps) report.mean_condition_steps.push_back(v / n_sims);
    }
    return report;
}

std::string test_report_to_csv(const TestReport& report, const RunConfig& config) {
    std::ostringstream os;
    if (config.task == TaskId::cart_pole) {
        os << "simulation,fitness";
        for (double size : config.cartpole.test_schedule.sizes) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "steps_%g", size);
            os << ',' << buf;
        }
        os << ",environment_order\n";
        for (const TestSimRow& row : report.rows) {
            os << row.index << ',' << format_double(row.report.fitness);
            // condition_steps are in run order; report them per configured size
            for (double size : config.cartpole.test_schedule.sizes) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%g", size);
                std::int64_t steps = 0;
                std::istringstream order(row.report.environment_order);
                std::string tok;
                std::size_t k = 0;
                while (std::getline(order, tok, ',')) {
                    while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
                    if (tok == buf && k < row.report.condition_steps.size()) {
                        steps = row.report.condition_steps[k];
                        break;
                    }
                    ++k;
                }
                os << ',' << steps;
            }
            os << ',' << csv_quote(row.report.environment_order) << "\n";
        }
        os << "avg," << format_double(report.mean_fitness);
        // per-size averages from the rows just written
        for (std::size_t s = 0; s < config.cartpole.test_schedule.sizes.size(); ++s) {
            double sum = 0;
            for (const TestSimRow& row : report.rows) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%g", config.cartpole.test_schedule.sizes[s]);
                std::istringstream order(row.report.environment_order);
                std::string tok;
                std::size_t k = 0;
                while (std::getline(order, tok, ',')) {
                    while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
                    if (tok == buf && k < row.report.condition_steps.size()) {
                        sum += static_cast<double>(row.report.condition_steps[k]);
                        break;
                    }
                    ++k;
                }
            }
            os << ',' << format_double(report.rows.empty() ? 0.0 : sum / report.rows.size());
        }
        os << ",\n";
    } else {
        os << "simulation,accuracy,eos_accuracy,input_order,environment_order\n";
        for (const TestSimRow& row : report.rows) {
            os << row.index << ',' << format_double(row.report.accuracy) << ','
               << format_double(row.report.eos_accuracy) << ','
               << csv_quote(row.report.input_order) << ','
               << csv_quote(row.report.environment_order) << "\n";
        }
        os << "avg," << format_double(report.mean_accuracy) << ','
           << format_double(report.mean_eos) << ",,\n";
    }
    return os.str();
}

std::string describe_genome(const Genome& g) {
    std::ostringstream os;
    int n_in = 0, n_hidden = 0, n_out = 0;
    for (const NodeGene& n : g.nodes) {
        if (n.kind == NodeKind::input) ++n_in;
        else if (n.kind == NodeKind::hidden) ++n_hidden;
        else ++n_out;
    }
    os << "nodes: " << g.nodes.size() << " (" << n_in << " input, " << n_hidden << " hidden, "
       << n_out << " output), enabled connections: " << g.count_enabled() << "\n";
    os << "id  kind    neurotransmitter  rule                      bias\n";
    for (const NodeGene& n : g.nodes) {
        char line[128];
        if (n.kind == NodeKind::input) {
            std::snprintf(line, sizeof line, "%-3d input   -                 -                         -",
                          n.id);
        } else {
            std::snprintf(line, sizeof line, "%-3d %-7s %-17s %-25s %s", n.id,
                          n.kind == NodeKind::hidden ? "hidden" : "output",
                          n.nt == Neurotransmitter::excitatory ? "excitatory" : "inhibitory",
                          rule_kind_name(n.rule.kind), n.bias ? "yes" : "no");
        }
        os << line << "\n";
    }
    os << "edges (innovation: from -> to):\n";
    for (const ConnectionGene& c : g.connections) {
        os << "  " << c.innovation << ": " << c.from << " -> " << c.to
           << (c.enabled ? "" : "  [disabled]") << "\n";
    }
    return os.str();
}

std::string genome_to_dot(const Genome& g) {
    std::ostringstream os;
    os << "digraph genome {\n  rankdir=LR;\n";
    for (const NodeGene& n : g.nodes) {
        os << "  n" << n.id << " [label=\"" << n.id;
        if (n.kind != NodeKind::input) {
            os << "\\n" << rule_kind_name(n.rule.kind);
            if (n.bias) os << "\\nbias";
        }
        os << "\"";
        if (n.kind == NodeKind::input) os << ", shape=box";
        else if (n.kind == NodeKind::output) os << ", shape=doublecircle";
        if (n.kind != NodeKind::input && n.nt == Neurotransmitter::inhibitory)
            os << ", style=dashed";
        os << "];\n";
    }
    for (const ConnectionGene& c : g.connections) {
        if (!c.enabled) continue;
        os << "  n" << c.from << " -> n" << c.to << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::vector<std::string> export_curves(const std::string& run_dir) {
    std::ifstream in(run_dir + "/stats.csv");
    if (!in) throw std::runtime_error("missing stats.csv in " + run_dir);
    std::string header;
    std::getline(in, header);
    if (header != kStatsCsvHeader)
        throw std::runtime_error("unexpected stats.csv schema in " + run_dir);

    struct Row {
        std::string gen;
        std::array<std::string, 9> v;
    };
    std::vector<Row> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Row r;
        std::istringstream ls(line);
        std::string tok;
        std::getline(ls, r.gen, ',');
        for (int i = 0; i < 9; ++i) std::getline(ls, r.v[i], ',');
        rows.push_back(std::move(r));
    }

    const struct {
        const char* file;
        int base;
    } curves[] = {{"fitness.csv", 0}, {"accuracy.csv", 3}, {"eos_accuracy.csv", 6}};
    std::vector<std::string> written;
    for (const auto& c : curves) {
        const std::string path = run_dir + "/" + c.file;
        std::ofstream out(path, std::ios::binary);
        out << "generation,min,mean,max\n";
        for (const Row& r : rows) {
            const double mn = std::stod(r.v[c.base]);
            const double mean = std::stod(r.v[c.base + 1]);
            const double mx = std::stod(r.v[c.base + 2]);
            if (mn > mean || mean > mx)
                throw std::runtime_error("stats.csv row violates min <= mean <= max");
            out << r.gen << ',' << r.v[c.base] << ',' << r.v[c.base + 1] << ',' << r.v[c.base + 2]
                << "\n";
        }
        written.push_back(path);
    }
    return written;
}

} // namespace snnevo
