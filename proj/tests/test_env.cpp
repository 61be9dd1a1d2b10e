#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "snnevo/env.hpp"
#include "snnevo/genome.hpp"

using namespace snnevo;

namespace {

BinaryEnvConfig desk_config() {
    BinaryEnvConfig cfg;
    cfg.sample_steps = 1000;
    return cfg;
}

// drives the environment with a scripted policy, bypassing any network
template <typename Policy>
LifetimeReport run_policy(BinaryEnv& env, Policy&& policy) {
    while (!env.done()) {
        const auto [action, counts] = policy(env);
        env.apply(action, counts);
    }
    return env.report();
}

} // namespace

TEST_CASE("food truth table, exhaustive") {
    // hand-coded from the task definition: rows are input black/white,
    // columns edible = black, white, none, both
    const int expected[2][4] = {
        {kActionEat, kActionAvoid, kActionAvoid, kActionEat},  // input black
        {kActionAvoid, kActionEat, kActionAvoid, kActionEat},  // input white
    };
    for (int input = 0; input < 2; ++input)
        for (int edible = 0; edible < 4; ++edible)
            CHECK(correct_food_action(static_cast<EdibleSet>(edible),
                                      static_cast<FoodColor>(input)) == expected[input][edible]);
}

TEST_CASE("logic gate truth tables, exhaustive") {
    const struct {
        Gate gate;
        int out[4];  // inputs (0,0), (0,1), (1,0), (1,1)
    } table[] = {
        {Gate::gate_a, {0, 0, 1, 1}},
        {Gate::gate_b, {0, 1, 0, 1}},
        {Gate::gate_not_a, {1, 1, 0, 0}},
        {Gate::gate_not_b, {1, 0, 1, 0}},
        {Gate::gate_only0, {0, 0, 0, 0}},
        {Gate::gate_only1, {1, 1, 1, 1}},
        {Gate::gate_xor, {0, 1, 1, 0}},
        {Gate::gate_xnor, {1, 0, 0, 1}},
        {Gate::gate_and, {0, 0, 0, 1}},
        {Gate::gate_nand, {1, 1, 1, 0}},
        {Gate::gate_or, {0, 1, 1, 1}},
        {Gate::gate_nor, {1, 0, 0, 0}},
    };
    for (const auto& row : table) {
        int idx = 0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                CHECK(correct_gate_output(row.gate, a, b) == row.out[idx++]);
    }
    // training and testing sets are disjoint
    std::set<Gate> train(training_gates().begin(), training_gates().end());
    for (Gate g : testing_gates()) CHECK(train.count(g) == 0);
}

TEST_CASE("spike participation: symmetry, bounds, branch handoff") {
    CHECK(spike_participation(3, 0, 3).first == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(spike_participation(10, 5, 3).first == doctest::Approx(10.0 / 15.0).epsilon(1e-12));

    for (int st = 1; st <= 5; ++st) {
        for (int sc = 0; sc <= 20; ++sc) {
            for (int si = 0; si <= 20; ++si) {
                const auto [pc, pi] = spike_participation(sc, si, st);
                CHECK(pc + pi == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(pc >= 0.0);
                CHECK(pc <= 1.0);
                if (sc == si) CHECK(pc == doctest::Approx(0.5).epsilon(1e-12));
            }
        }
        // the two branches agree where they meet
        for (int sc = 0; sc <= 2 * st; ++sc) {
            const int si = 2 * st - sc;
            const double low = (std::min(sc, st) - std::min(si, st) + st) / (2.0 * st);
            const double high = static_cast<double>(sc) / (sc + si);
            CHECK(low == doctest::Approx(high).epsilon(1e-12));
        }
    }
}

TEST_CASE("damage model") {
    DamageModel m;
    CHECK(damage(0, 0, m) == 2.0);
    CHECK(damage(3, 0, m) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(damage(4, 4, m) == doctest::Approx(1.5).epsilon(1e-15));
    for (int sc = 0; sc <= 20; ++sc)
        for (int si = 0; si <= 20; ++si) {
            const double d = damage(sc, si, m);
            CHECK(d >= m.d_correct);
            CHECK(d <= m.d_incorrect);
        }
}

TEST_CASE("fitness from lifetime") {
    CHECK(fitness_from_lifetime(8000, 8000, 16000) == 0.0);
    CHECK(fitness_from_lifetime(16000, 8000, 16000) == 1.0);
    CHECK(fitness_from_lifetime(12000, 8000, 16000) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(fitness_from_lifetime(7999, 8000, 16000), std::out_of_range);
    CHECK_THROWS_AS(fitness_from_lifetime(16001, 8000, 16000), std::out_of_range);
}

TEST_CASE("an always-correct confident agent survives the whole schedule") {
    BinaryEnv env(BinaryEnv::Task::food, desk_config(), 7);
    CHECK(env.l_max() == 32000);
    CHECK(env.l_min() == 16000);
    const LifetimeReport r = run_policy(env, [](BinaryEnv& e) {
        std::array<int, 2> counts{};
        counts[e.correct_action()] = 3;
        return std::pair{e.correct_action(), counts};
    });
    CHECK(r.survived_steps == 32000);
    CHECK(r.fitness == 1.0);
    CHECK(r.accuracy == 1.0);
    CHECK(r.eos_accuracy == 1.0);
    CHECK(r.samples.size() == 32);
}

TEST_CASE("an always-wrong confident agent dies at the lower bound") {
    BinaryEnv env(BinaryEnv::Task::food, desk_config(), 7);
    const LifetimeReport r = run_policy(env, [](BinaryEnv& e) {
        std::array<int, 2> counts{};
        counts[1 - e.correct_action()] = 3;
        return std::pair{1 - e.correct_action(), counts};
    });
    CHECK(r.survived_steps == 16000);
    CHECK(r.fitness == 0.0);
    CHECK(r.accuracy == 0.0);
}

TEST_CASE("a silent agent takes the incorrect damage every step") {
    BinaryEnv env(BinaryEnv::Task::food, desk_config(), 7);
    const LifetimeReport r = run_policy(env, [](BinaryEnv&) {
        return std::pair{kNoAction, std::array<int, 2>{0, 0}};
    });
    CHECK(r.survived_steps == 16000);
    CHECK(r.fitness == 0.0);
}

TEST_CASE("training schedule: four samples per condition, fixed cyclic order") {
    BinaryEnvConfig cfg = desk_config();
    BinaryEnv env(BinaryEnv::Task::food, cfg, 3);
    const LifetimeReport r = run_policy(env, [](BinaryEnv& e) {
        std::array<int, 2> counts{};
        counts[e.correct_action()] = 3;
        return std::pair{e.correct_action(), counts};
    });
    REQUIRE(r.samples.size() == 32);
    for (int s = 0; s < 32; ++s) CHECK(r.samples[s].condition == (s / 4) % 4);
    CHECK(r.environment_order == "black, white, none, both");
    // the two colors alternate
    for (int s = 1; s < 32; ++s)
        CHECK(r.samples[s].bits[0] == 1 - r.samples[s - 1].bits[0]);
}

TEST_CASE("test schedule permutes conditions per seed") {
    BinaryEnvConfig cfg = desk_config();
    cfg.randomize_condition_order = true;
    std::set<std::string> orders;
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        BinaryEnv env(BinaryEnv::Task::logic_test, cfg, seed);
        const std::string order = env.environment_order_string();
        orders.insert(order);
        // every permutation covers each test gate exactly once
        std::set<std::string> gates;
        std::size_t pos = 0;
        while (pos < order.size()) {
            std::size_t comma = order.find(", ", pos);
            if (comma == std::string::npos) {
                gates.insert(order.substr(pos));
                break;
            }
            gates.insert(order.substr(pos, comma - pos));
            pos = comma + 2;
        }
        CHECK(gates.size() == 4);
    }
    CHECK(orders.size() > 1);
}

TEST_CASE("logic training env uses the eight training gates") {
    BinaryEnvConfig cfg = desk_config();
    BinaryEnv env(BinaryEnv::Task::logic_train, cfg, 5);
    CHECK(env.l_max() == 64000);  // 2 cycles of 8 gates x 4 samples x 1000 steps
    CHECK(env.input_channels() == 6);
    CHECK(env.environment_order_string() == "A, B, NOT A, NOT B, ONLY 0, ONLY 1, XOR, XNOR");
}

TEST_CASE("reward and penalty are never simultaneously high") {
    RateRange r;
    for (bool correct : {false, true}) {
        const auto [reward, penalty] = feedback_rates(correct, r);
        CHECK(((reward == r.high_hz) ^ (penalty == r.high_hz)));
        CHECK(std::min(reward, penalty) == r.low_hz);
        CHECK(std::max(reward, penalty) == r.high_hz);
    }
}

TEST_CASE("run_lifetime wires a network into the food environment") {
    InnovationRegistry reg;
    Rng rng(2024);
    const Genome g = init_genome(4, 2, reg, rng);
    SimParams params;
    params.actuator_window_ms = 25.0;
    Rng dev(9);
    Network net = develop(g, dev, params);
    BinaryEnv env(BinaryEnv::Task::food, desk_config(), 11);
    const LifetimeReport r = run_lifetime(net, env, params);
    CHECK(r.survived_steps >= env.l_min());
    CHECK(r.survived_steps <= env.l_max());
    CHECK(r.fitness >= 0.0);
    CHECK(r.fitness <= 1.0);
    CHECK(r.accuracy >= 0.0);
    CHECK(r.accuracy <= 1.0);
}

TEST_CASE("run_lifetime rejects a mismatched network") {
    InnovationRegistry reg;
    Rng rng(2025);
    const Genome g = init_genome(3, 2, reg, rng);
    SimParams params;
    Rng dev(9);
    Network net = develop(g, dev, params);
    BinaryEnv env(BinaryEnv::Task::food, desk_config(), 11);
    CHECK_THROWS_AS(run_lifetime(net, env, params), std::invalid_argument);
}

TEST_CASE("identical seeds give identical lifetimes") {
    InnovationRegistry reg;
    Rng rng(2026);
    const Genome g = init_genome(4, 2, reg, rng);
    SimParams params;
    params.actuator_window_ms = 25.0;
    auto once = [&] {
        Rng dev(33);
        Network net = develop(g, dev, params);
        BinaryEnv env(BinaryEnv::Task::food, desk_config(), 44);
        return run_lifetime(net, env, params);
    };
    const LifetimeReport a = once();
    const LifetimeReport b = once();
    CHECK(a.survived_steps == b.survived_steps);
    CHECK(a.fitness == b.fitness);
    CHECK(a.accuracy == b.accuracy);
    CHECK(a.eos_accuracy == b.eos_accuracy);
}
