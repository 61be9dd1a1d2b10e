// Acceptance suite: one pass/fail line per criterion. Exit code is the
// number of failed criteria. Individual criteria can be selected with
// `acceptance --only 1,2,5`; `--list` names them.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "snnevo/harness.hpp"

using namespace snnevo;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    int number;
    const char* name;
    bool (*run)(std::string& detail);
};

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "snnevo_acceptance";
    fs::create_directories(dir);
    return dir;
}

// --------------------------------------------------------------------------
// 1. STDP closed-form oracle

double oracle_gauss(double x, double sigma) {
    return 1.0 / (sigma * std::sqrt(2.0 * M_PI)) * std::exp(-0.5 * (x / sigma) * (x / sigma));
}

double oracle_delta_w(const LearningRule& r, double dt) {
    const double g = oracle_gauss(dt, r.shape_plus) - oracle_gauss(dt, r.shape_minus);
    switch (r.kind) {
        case RuleKind::asymmetric_hebbian:
            return dt > 0 ? r.a_plus * std::exp(-dt / r.shape_plus)
                          : (dt < 0 ? -r.a_minus * std::exp(dt / r.shape_minus) : 0.0);
        case RuleKind::asymmetric_anti_hebbian:
            return dt > 0 ? -r.a_plus * std::exp(-dt / r.shape_plus)
                          : (dt < 0 ? r.a_minus * std::exp(dt / r.shape_minus) : 0.0);
        case RuleKind::symmetric_hebbian:
            return g > 0 ? r.a_plus * g : (g < 0 ? r.a_minus * g : 0.0);
        case RuleKind::symmetric_anti_hebbian:
            return g > 0 ? -r.a_plus * g : (g < 0 ? -r.a_minus * g : 0.0);
    }
    return 0.0;
}

bool c1_stdp_oracle(std::string& detail) {
    Rng rng(20260808);
    int points = 0;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const RuleKind kind = static_cast<RuleKind>(i % kNumRuleKinds);
        const LearningRule rule = sample_rule(kind, rng);
        const double dt = rng.uniform(-40.0, 40.0);
        const double got = delta_w(rule, dt);
        const double want = oracle_delta_w(rule, dt);
        worst = std::max(worst, std::fabs(got - want));
        if (std::fabs(got - want) > 1e-12) return false;
        ++points;

        // anti-symmetry against the mirrored rule
        LearningRule anti = rule;
        anti.kind = kind == RuleKind::asymmetric_hebbian ? RuleKind::asymmetric_anti_hebbian
                    : kind == RuleKind::asymmetric_anti_hebbian ? RuleKind::asymmetric_hebbian
                    : kind == RuleKind::symmetric_hebbian ? RuleKind::symmetric_anti_hebbian
                                                          : RuleKind::symmetric_hebbian;
        if (std::fabs(delta_w(anti, dt) + got) > 1e-12) return false;
        // evenness of the symmetric rules
        if (is_symmetric(kind) && std::fabs(delta_w(rule, -dt) - got) > 1e-12) return false;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d points, max |err| %.2e", points, worst);
    detail = buf;
    return true;
}

// --------------------------------------------------------------------------
// 2. damage-model properties

bool c2_damage(std::string& detail) {
    DamageModel model;
    for (int st = 1; st <= 5; ++st) {
        model.s_target = st;
        for (int sc = 0; sc <= 20; ++sc) {
            for (int si = 0; si <= 20; ++si) {
                const auto [pc, pi] = spike_participation(sc, si, st);
                if (std::fabs(pc + pi - 1.0) > 1e-12) return false;
                if (pc < 0.0 || pc > 1.0) return false;
                if (sc == si && std::fabs(pc - 0.5) > 1e-12) return false;
                const double d = damage(sc, si, model);
                if (d < 1.0 - 1e-12 || d > 2.0 + 1e-12) return false;
            }
        }
        for (int sc = 0; sc <= 2 * st; ++sc) {
            const int si = 2 * st - sc;
            const double low = (std::min(sc, st) - std::min(si, st) + st) / (2.0 * st);
            const double high = static_cast<double>(sc) / (sc + si);
            if (std::fabs(low - high) > 1e-12) return false;
        }
    }
    detail = "s_c,s_i in [0,20]^2, s_t in [1,5], exhaustive";
    return true;
}

// --------------------------------------------------------------------------
// 3. truth tables

bool c3_truth_tables(std::string& detail) {
    const int food[2][4] = {{kActionEat, kActionAvoid, kActionAvoid, kActionEat},
                            {kActionAvoid, kActionEat, kActionAvoid, kActionEat}};
    int cases = 0;
    for (int input = 0; input < 2; ++input)
        for (int e = 0; e < 4; ++e, ++cases)
            if (correct_food_action(static_cast<EdibleSet>(e), static_cast<FoodColor>(input)) !=
                food[input][e])
                return false;

    const struct {
        Gate gate;
        int out[4];  // (0,0) (0,1) (1,0) (1,1)
    } gates[] = {
        {Gate::gate_a, {0, 0, 1, 1}},     {Gate::gate_b, {0, 1, 0, 1}},
        {Gate::gate_not_a, {1, 1, 0, 0}}, {Gate::gate_not_b, {1, 0, 1, 0}},
        {Gate::gate_only0, {0, 0, 0, 0}}, {Gate::gate_only1, {1, 1, 1, 1}},
        {Gate::gate_xor, {0, 1, 1, 0}},   {Gate::gate_xnor, {1, 0, 0, 1}},
        {Gate::gate_and, {0, 0, 0, 1}},   {Gate::gate_nand, {1, 1, 1, 0}},
        {Gate::gate_or, {0, 1, 1, 1}},    {Gate::gate_nor, {1, 0, 0, 0}},
    };
    for (const auto& row : gates) {
        int k = 0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b, ++cases)
                if (correct_gate_output(row.gate, a, b) != row.out[k++]) return false;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%d cases byte-exact", cases);
    detail = buf;
    return true;
}

// --------------------------------------------------------------------------
// 4. lifetime bounds with scripted agents

bool c4_lifetime_bounds(std::string& detail) {
    const RunConfig cfg = default_config(TaskId::food_foraging, "desk");
    BinaryEnv oracle_env(BinaryEnv::Task::food, cfg.env, 404);
    while (!oracle_env.done()) {
        std::array<int, 2> counts{};
        counts[oracle_env.correct_action()] = cfg.env.damage.s_target;
        oracle_env.apply(oracle_env.correct_action(), counts);
    }
    const LifetimeReport good = oracle_env.report();
    if (good.fitness != 1.0) return false;
    if (good.survived_steps != oracle_env.l_max()) return false;

    BinaryEnv wrong_env(BinaryEnv::Task::food, cfg.env, 404);
    while (!wrong_env.done()) {
        std::array<int, 2> counts{};
        counts[1 - wrong_env.correct_action()] = cfg.env.damage.s_target;
        wrong_env.apply(1 - wrong_env.correct_action(), counts);
    }
    const LifetimeReport bad = wrong_env.report();
    if (bad.fitness != 0.0) return false;
    if (bad.survived_steps != wrong_env.l_min()) return false;

    char buf[128];
    std::snprintf(buf, sizeof buf, "oracle %lld steps -> 1.0, always-wrong %lld steps -> 0.0",
                  static_cast<long long>(good.survived_steps),
                  static_cast<long long>(bad.survived_steps));
    detail = buf;
    return true;
}

// --------------------------------------------------------------------------
// 5. spike-generator calibration

bool c5_generator(std::string& detail) {
    for (double hz : {5.0, 10.0, 25.0, 50.0}) {
        SpikeTrainGenerator gen(0.1);
        gen.set_rate(hz, 0);
        int count = 0;
        for (std::int64_t t = 0; t < 10000; ++t) count += gen.step(t);
        if (std::abs(count - static_cast<int>(hz)) > 1) return false;
    }
    detail = "5/10/25/50 Hz within +-1 spike over 1 s";
    return true;
}

// --------------------------------------------------------------------------
// 6. determinism of full desk runs

bool c6_determinism(std::string& detail) {
    const double start = now_seconds();
    std::string parts;
    for (TaskId task : {TaskId::food_foraging, TaskId::logic_gate, TaskId::cart_pole}) {
        RunConfig cfg = default_config(task, "desk");
        cfg.evolution.master_seed = 2024;
        const fs::path a = work_dir() / (std::string("det_a_") + task_name(task));
        const fs::path b = work_dir() / (std::string("det_b_") + task_name(task));
        fs::remove_all(a);
        fs::remove_all(b);
        run_evolution(cfg, a.string(), false, true);
        run_evolution(cfg, b.string(), false, true);
        const std::string sa = slurp((a / "stats.csv").string());
        if (sa.empty() || sa != slurp((b / "stats.csv").string())) return false;
        parts += std::string(task_name(task)) + " ok; ";
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%.0f s total", parts.c_str(), now_seconds() - start);
    detail = buf;
    return true;
}

// --------------------------------------------------------------------------
// 7-9. statistical desk-scale learning runs

struct SeedOutcome {
    bool pass = false;
    std::string note;
};

bool learning_criterion(TaskId task, int n_seeds,
                        SeedOutcome (*check)(const RunConfig&, const RunResult&, int),
                        std::string& detail) {
    const double start = now_seconds();
    for (int seed = 1; seed <= n_seeds; ++seed) {
        RunConfig cfg = default_config(task, "desk");
        cfg.evolution.master_seed = static_cast<std::uint64_t>(seed);
        const fs::path dir =
            work_dir() / (std::string("learn_") + task_name(task) + "_s" + std::to_string(seed));
        fs::remove_all(dir);
        const RunResult run = run_evolution(cfg, dir.string(), false, true);
        const SeedOutcome outcome = check(cfg, run, seed);
        std::printf("    seed %d: %s (%.0f s elapsed)\n", seed, outcome.note.c_str(),
                    now_seconds() - start);
        std::fflush(stdout);
        if (outcome.pass) {
            char buf[192];
            std::snprintf(buf, sizeof buf, "seed %d passed: %s (%.0f s)", seed,
                          outcome.note.c_str(), now_seconds() - start);
            detail = buf;
            return true;
        }
    }
    detail = "no seed reached the bar";
    return false;
}

SeedOutcome food_check(const RunConfig& cfg, const RunResult& run, int seed) {
    SeedOutcome out;
    double best = 0.0;
    const Champions& ch = run.evolution.champions;
    for (const Champions::Entry* entry : {&ch.by_eos, &ch.by_accuracy, &ch.by_fitness}) {
        if (!entry->valid) continue;
        ChampionRecord rec;
        rec.task = task_name(cfg.task);
        rec.genome = entry->genome;
        const TestReport rep = run_test_simulations(
            rec, cfg, cfg.test_simulations,
            derive_seed(cfg.evolution.master_seed, {0xFEEDULL, static_cast<std::uint64_t>(seed)}));
        best = std::max(best, rep.mean_eos);
    }
    out.pass = best >= 0.85;
    char buf[96];
    std::snprintf(buf, sizeof buf, "best champion mean EOS accuracy %.3f", best);
    out.note = buf;
    return out;
}

SeedOutcome logic_check(const RunConfig& cfg, const RunResult& run, int seed) {
    SeedOutcome out;
    double best = 0.0;
    const Champions& ch = run.evolution.champions;
    for (const Champions::Entry* entry : {&ch.by_accuracy, &ch.by_eos, &ch.by_fitness}) {
        if (!entry->valid) continue;
        ChampionRecord rec;
        rec.task = task_name(cfg.task);
        rec.genome = entry->genome;
        const TestReport rep = run_test_simulations(
            rec, cfg, cfg.test_simulations,
            derive_seed(cfg.evolution.master_seed, {0x10C1ULL, static_cast<std::uint64_t>(seed)}));
        best = std::max(best, rep.mean_accuracy);
    }
    out.pass = best >= 0.70;
    char buf[96];
    std::snprintf(buf, sizeof buf, "best champion mean test-gate accuracy %.3f", best);
    out.note = buf;
    return out;
}

SeedOutcome cartpole_check(const RunConfig& cfg, const RunResult& run, int seed) {
    SeedOutcome out;
    if (!run.evolution.champions.by_fitness.valid) {
        out.note = "no champion";
        return out;
    }
    ChampionRecord rec;
    rec.task = task_name(cfg.task);
    rec.genome = run.evolution.champions.by_fitness.genome;
    const TestReport rep = run_test_simulations(
        rec, cfg, cfg.test_simulations,
        derive_seed(cfg.evolution.master_seed, {0xCA27ULL, static_cast<std::uint64_t>(seed)}));
    int successes = 0;
    for (const TestSimRow& row : rep.rows) {
        bool all = row.report.condition_steps.size() == 2;
        for (std::int64_t steps : row.report.condition_steps) all = all && steps > 100;
        successes += all;
    }
    out.pass = successes >= 5;
    char buf[96];
    std::snprintf(buf, sizeof buf, "success on both unseen sizes in %d/10 sims", successes);
    out.note = buf;
    return out;
}

bool c7_food(std::string& detail) {
    return learning_criterion(TaskId::food_foraging, 5, food_check, detail);
}
bool c8_logic(std::string& detail) {
    return learning_criterion(TaskId::logic_gate, 5, logic_check, detail);
}
bool c9_cartpole(std::string& detail) {
    return learning_criterion(TaskId::cart_pole, 5, cartpole_check, detail);
}

// --------------------------------------------------------------------------
// 10. physics oracle

CartPoleState oracle_physics(const CartPoleState& s, double force, const CartPoleParams& p) {
    const double mt = p.cart_mass + p.pole_mass;
    const double pml = p.pole_mass * p.half_length;
    const double ct = std::cos(s.theta), st = std::sin(s.theta);
    const double tmp = (force + pml * s.theta_dot * s.theta_dot * st) / mt;
    const double ta = (p.gravity * st - ct * tmp) /
                      (p.half_length * (4.0 / 3.0 - p.pole_mass * ct * ct / mt));
    const double xa = tmp - pml * ta * ct / mt;
    return {s.x + p.tau * s.x_dot, s.x_dot + p.tau * xa, s.theta + p.tau * s.theta_dot,
            s.theta_dot + p.tau * ta};
}

bool c10_physics(std::string& detail) {
    Rng rng(10101);
    CartPoleParams p;
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        p.half_length = rng.uniform(0.3, 0.7);
        const CartPoleState s{rng.uniform(-2.4, 2.4), rng.uniform(-4, 4),
                              rng.uniform(-0.25, 0.25), rng.uniform(-4, 4)};
        const double force = rng.uniform(-10.0, 10.0);
        const CartPoleState a = physics_step(s, force, p);
        const CartPoleState b = oracle_physics(s, force, p);
        worst = std::max({worst, std::fabs(a.x - b.x), std::fabs(a.x_dot - b.x_dot),
                          std::fabs(a.theta - b.theta), std::fabs(a.theta_dot - b.theta_dot)});
        if (worst > 1e-12) return false;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "10000 states, max |err| %.2e", worst);
    detail = buf;
    return true;
}

// --------------------------------------------------------------------------
// 11. genome locus statistics

bool c11_genome_stats(std::string& detail) {
    InnovationRegistry reg;
    Rng rng(111111);

    // initialization loci over 10,000 output nodes
    int bias = 0, hebbian = 0, outputs = 0;
    for (int i = 0; i < 5000; ++i) {
        const Genome g = init_genome(2, 2, reg, rng);
        for (const NodeGene& n : g.nodes) {
            if (n.kind != NodeKind::output) continue;
            ++outputs;
            bias += n.bias;
            hebbian += is_hebbian(n.rule.kind);
        }
    }
    const double bias_rate = static_cast<double>(bias) / outputs;
    const double hebbian_rate = static_cast<double>(hebbian) / outputs;

    // hidden-node draws via forced add-node mutations
    MutationConfig grow;
    grow.add_node_rate = 1.0;
    grow.add_connection_rate = 0.0;
    grow.locus_rate = 0.0;
    grow.reinit_rate = 0.0;
    int excitatory = 0, hidden_total = 0;
    for (int i = 0; i < 10000; ++i) {
        Genome g = init_genome(1, 1, reg, rng);
        const Genome m = mutate(g, reg, rng, grow);
        for (const NodeGene& n : m.nodes)
            if (n.kind == NodeKind::hidden) {
                ++hidden_total;
                excitatory += n.nt == Neurotransmitter::excitatory;
            }
    }
    const double excitatory_rate = static_cast<double>(excitatory) / hidden_total;

    // locus mutation rates over 10,000 mutate calls on a 2-locus-node genome
    InnovationRegistry reg2;
    MutationConfig grow2 = grow;
    Genome base = init_genome(1, 1, reg2, rng);
    base = mutate(base, reg2, rng, grow2);
    MutationConfig cfg;
    cfg.add_connection_rate = 0.0;
    cfg.add_node_rate = 0.0;
    MutationStats stats;
    for (int i = 0; i < 10000; ++i) (void)mutate(base, reg2, rng, cfg, &stats);
    const double sites = static_cast<double>(stats.locus_sites);
    const double switch_rate = stats.kind_switches / sites;
    const double nt_rate =
        static_cast<double>(stats.nt_switches) / 10000.0;  // one hidden node per call
    const double bias_flip_rate = stats.bias_flips / sites;
    const double reinit_rate = stats.param_reinits / sites;

    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "init bias %.3f (0.20), init hebbian %.3f (0.70), hidden excitatory %.3f "
                  "(0.70), nt switch %.3f / bias flip %.3f / rule switch %.3f (0.10), reinit "
                  "%.3f (0.02)",
                  bias_rate, hebbian_rate, excitatory_rate, nt_rate, bias_flip_rate, switch_rate,
                  reinit_rate);
    detail = buf;
    const auto within = [](double v, double target) { return std::fabs(v - target) <= 0.02; };
    return within(bias_rate, 0.20) && within(hebbian_rate, 0.70) &&
           within(excitatory_rate, 0.70) && within(nt_rate, 0.10) &&
           within(bias_flip_rate, 0.10) && within(switch_rate, 0.10) &&
           within(reinit_rate, 0.02);
}

const Criterion kCriteria[] = {
    {1, "STDP closed-form oracle (1e-12)", c1_stdp_oracle},
    {2, "damage-model properties, exhaustive", c2_damage},
    {3, "truth-table oracle, byte-exact", c3_truth_tables},
    {4, "lifetime bounds: oracle 1.0, always-wrong 0.0", c4_lifetime_bounds},
    {5, "spike-generator calibration +-1 spike", c5_generator},
    {6, "byte-identical desk runs, all three tasks", c6_determinism},
    {7, "food foraging: champion EOS accuracy >= 0.85 on test sims", c7_food},
    {8, "logic gates: champion accuracy >= 0.70 on unseen gates", c8_logic},
    {9, "cart-pole: >100 iterations on both unseen sizes in >= 5/10 sims", c9_cartpole},
    {10, "cart-pole physics oracle (1e-12)", c10_physics},
    {11, "genome locus statistics within +-2 pp", c11_genome_stats},
};

} // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--list") == 0) {
            for (const Criterion& c : kCriteria) std::printf("%2d  %s\n", c.number, c.name);
            return 0;
        }
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            const std::string arg = argv[++i];
            std::size_t pos = 0;
            while (pos < arg.size()) {
                only.insert(std::stoi(arg.substr(pos)));
                const std::size_t comma = arg.find(',', pos);
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
        }
    }

    int failed = 0;
    const double suite_start = now_seconds();
    for (const Criterion& c : kCriteria) {
        if (!only.empty() && !only.count(c.number)) continue;
        const double start = now_seconds();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("%s  criterion %2d: %s%s%s  [%.1f s]\n", ok ? "PASS" : "FAIL", c.number,
                    c.name, detail.empty() ? "" : " -- ", detail.c_str(),
                    now_seconds() - start);
        std::fflush(stdout);
        failed += !ok;
    }
    std::printf("%s: %d criteria failed  [total %.1f s]\n", failed == 0 ? "OK" : "FAILURES",
                failed, now_seconds() - suite_start);
    return failed;
}
