#include "snnevo/config.hpp"

#include <fstream>
#include <stdexcept>

namespace snnevo {

const char* task_name(TaskId t) {
    switch (t) {
        case TaskId::food_foraging: return "food-foraging";
        case TaskId::logic_gate: return "logic-gate";
        case TaskId::cart_pole: return "cart-pole";
    }
    return "?";
}

TaskId task_from_name(const std::string& name) {
    if (name == "food-foraging" || name == "food") return TaskId::food_foraging;
    if (name == "logic-gate" || name == "logic") return TaskId::logic_gate;
    if (name == "cart-pole" || name == "cartpole") return TaskId::cart_pole;
    throw std::invalid_argument("unknown task: " + name +
                                " (expected food-foraging, logic-gate or cart-pole)");
}

bool task_is_binary(TaskId t) { return t != TaskId::cart_pole; }

RunConfig default_config(TaskId task, const std::string& profile) {
    if (profile != "paper" && profile != "desk")
        throw std::invalid_argument("unknown profile: " + profile + " (expected paper or desk)");

    RunConfig c;
    c.task = task;
    c.profile = profile;

    switch (task) {
        case TaskId::food_foraging:
            c.evolution.n_inputs = 4;
            c.evolution.n_outputs = 2;
            c.evolution.population_size = 100;
            c.evolution.generations = 1000;
            break;
        case TaskId::logic_gate:
            c.evolution.n_inputs = 6;
            c.evolution.n_outputs = 2;
            c.evolution.population_size = 100;
            c.evolution.generations = 1000;
            break;
        case TaskId::cart_pole:
            c.evolution.n_inputs = 12;
            c.evolution.n_outputs = 2;
            c.evolution.population_size = 256;
            c.evolution.generations = 500;
            // one actuator window of network time per environment iteration,
            // so every decision reads exactly its own window of spikes
            c.cartpole.snn_steps_per_iteration = 2500;
            break;
    }

    if (profile == "desk") {
        switch (task) {
            case TaskId::food_foraging:
            case TaskId::logic_gate:
                c.evolution.population_size = 50;
                c.evolution.generations = 100;
                c.env.sample_steps = 1000;
                // keep the actuator window a quarter of a sample, as at paper scale
                c.sim.actuator_window_ms = 25.0;
                break;
            case TaskId::cart_pole:
                c.evolution.population_size = 64;
                c.evolution.generations = 100;
                // halved decision window, same window-per-iteration binding
                c.cartpole.snn_steps_per_iteration = 1250;
                c.sim.actuator_window_ms = 125.0;
                break;
        }
        // the short generation budget wants a denser structural search and
        // finer species than the full-scale defaults
        c.evolution.speciation.threshold = 1.5;
        c.evolution.mutation.add_connection_rate = 0.15;
        c.evolution.mutation.add_node_rate = 0.08;
        c.checkpoint_every = 50;
    }
    return c;
}

namespace {

[[noreturn]] void bad_key(const std::string& path) {
    throw std::invalid_argument("unknown config key: " + path);
}

template <typename T>
T expect(const Json& j, const std::string& path) {
    try {
        return j.get<T>();
    } catch (const Json::exception&) {
        throw std::invalid_argument("bad value for config key: " + path);
    }
}

} // namespace

Json config_to_json(const RunConfig& c) {
    Json j;
    j["task"] = task_name(c.task);
    j["profile"] = c.profile;

    Json evo;
    evo["population_size"] = c.evolution.population_size;
    evo["generations"] = c.evolution.generations;
    evo["elitism_fraction"] = c.evolution.elitism_fraction;
    evo["tournament_size"] = c.evolution.tournament_size;
    evo["master_seed"] = c.evolution.master_seed;
    evo["workers"] = c.evolution.workers;
    Json spec;
    spec["c1"] = c.evolution.speciation.coefficients.c1;
    spec["c2"] = c.evolution.speciation.coefficients.c2;
    spec["c3"] = c.evolution.speciation.coefficients.c3;
    spec["threshold"] = c.evolution.speciation.threshold;
    spec["stagnation_generations"] = c.evolution.speciation.stagnation_generations;
    evo["speciation"] = spec;
    Json mut;
    mut["locus_rate"] = c.evolution.mutation.locus_rate;
    mut["reinit_rate"] = c.evolution.mutation.reinit_rate;
    mut["add_connection_rate"] = c.evolution.mutation.add_connection_rate;
    mut["add_node_rate"] = c.evolution.mutation.add_node_rate;
    mut["excitatory_prob"] = c.evolution.mutation.excitatory_prob;
    mut["bias_prob"] = c.evolution.mutation.bias_prob;
    mut["preferred_family_prob"] = c.evolution.mutation.preferred_family_prob;
    evo["mutation"] = mut;
    j["evolution"] = evo;

    Json sim;
    sim["dt_ms"] = c.sim.dt_ms;
    sim["membrane_decay_per_step"] = c.sim.membrane_decay_per_step;
    sim["theta_decay_per_step"] = c.sim.theta_decay_per_step;
    sim["resting_threshold"] = c.sim.resting_threshold;
    sim["theta_increment"] = c.sim.theta_increment;
    sim["bias_current"] = c.sim.bias_current;
    sim["weight_budget"] = c.sim.weight_budget;
    sim["stdp_window_ms"] = c.sim.stdp_window_ms;
    sim["actuator_window_ms"] = c.sim.actuator_window_ms;
    sim["stdp_pair_full_history"] = c.sim.stdp_pair_full_history;
    j["simulation"] = sim;

    Json env;
    env["sample_steps"] = c.env.sample_steps;
    env["samples_per_condition"] = c.env.samples_per_condition;
    env["health_cycles"] = c.env.health_cycles;
    env["d_correct"] = c.env.damage.d_correct;
    env["d_incorrect"] = c.env.damage.d_incorrect;
    env["spike_target"] = c.env.damage.s_target;
    env["initial_health"] = c.env.damage.initial_health;
    env["rate_low_hz"] = c.env.rates.low_hz;
    env["rate_high_hz"] = c.env.rates.high_hz;
    j["environment"] = env;

    Json cart;
    cart["train_sizes"] = c.cartpole.train_schedule.sizes;
    cart["train_repeats"] = c.cartpole.train_schedule.repeats;
    cart["test_sizes"] = c.cartpole.test_schedule.sizes;
    cart["max_iterations"] = c.cartpole.train_schedule.max_iterations;
    cart["snn_steps_per_iteration"] = c.cartpole.snn_steps_per_iteration;
    cart["reset_perturbation"] = c.cartpole.reset_perturbation;
    cart["gravity"] = c.cartpole.params.gravity;
    cart["cart_mass"] = c.cartpole.params.cart_mass;
    cart["pole_mass"] = c.cartpole.params.pole_mass;
    cart["force_mag"] = c.cartpole.params.force_mag;
    cart["tau"] = c.cartpole.params.tau;
    j["cartpole"] = cart;

    j["test_simulations"] = c.test_simulations;
    j["checkpoint_every"] = c.checkpoint_every;
    return j;
}

void config_apply_json(RunConfig& c, const Json& j, const std::string& base) {
    for (const auto& [key, val] : j.items()) {
        const std::string path = base.empty() ? key : base + "." + key;
        if (base.empty()) {
            if (key == "task") {
                c.task = task_from_name(expect<std::string>(val, path));
            } else if (key == "profile") {
                c.profile = expect<std::string>(val, path);
            } else if (key == "evolution" || key == "simulation" || key == "environment" ||
                       key == "cartpole") {
                config_apply_json(c, val, key);
            } else if (key == "test_simulations") {
                c.test_simulations = expect<int>(val, path);
            } else if (key == "checkpoint_every") {
                c.checkpoint_every = expect<int>(val, path);
            } else {
                bad_key(path);
            }
        } else if (base == "evolution") {
            if (key == "population_size") c.evolution.population_size = expect<int>(val, path);
            else if (key == "generations") c.evolution.generations = expect<int>(val, path);
            else if (key == "elitism_fraction") c.evolution.elitism_fraction = expect<double>(val, path);
            else if (key == "tournament_size") c.evolution.tournament_size = expect<int>(val, path);
            else if (key == "master_seed") c.evolution.master_seed = expect<std::uint64_t>(val, path);
            else if (key == "workers") c.evolution.workers = expect<int>(val, path);
            else if (key == "speciation") config_apply_json(c, val, "evolution.speciation");
            else if (key == "mutation") config_apply_json(c, val, "evolution.mutation");
            else bad_key(path);
        } else if (base == "evolution.speciation") {
            if (key == "c1") c.evolution.speciation.coefficients.c1 = expect<double>(val, path);
            else if (key == "c2") c.evolution.speciation.coefficients.c2 = expect<double>(val, path);
            else if (key == "c3") c.evolution.speciation.coefficients.c3 = expect<double>(val, path);
            else if (key == "threshold") c.evolution.speciation.threshold = expect<double>(val, path);
            else if (key == "stagnation_generations")
                c.evolution.speciation.stagnation_generations = expect<int>(val, path);
            else bad_key(path);
        } else if (base == "evolution.mutation") {
            if (key == "locus_rate") c.evolution.mutation.locus_rate = expect<double>(val, path);
            else if (key == "reinit_rate") c.evolution.mutation.reinit_rate = expect<double>(val, path);
            else if (key == "add_connection_rate")
                c.evolution.mutation.add_connection_rate = expect<double>(val, path);
            else if (key == "add_node_rate")
                c.evolution.mutation.add_node_rate = expect<double>(val, path);
            else if (key == "excitatory_prob")
                c.evolution.mutation.excitatory_prob = expect<double>(val, path);
            else if (key == "bias_prob") c.evolution.mutation.bias_prob = expect<double>(val, path);
            else if (key == "preferred_family_prob")
                c.evolution.mutation.preferred_family_prob = expect<double>(val, path);
            else bad_key(path);
        } else if (base == "simulation") {
            if (key == "dt_ms") c.sim.dt_ms = expect<double>(val, path);
            else if (key == "membrane_decay_per_step")
                c.sim.membrane_decay_per_step = expect<double>(val, path);
            else if (key == "theta_decay_per_step")
                c.sim.theta_decay_per_step = expect<double>(val, path);
            else if (key == "resting_threshold") c.sim.resting_threshold = expect<double>(val, path);
            else if (key == "theta_increment") c.sim.theta_increment = expect<double>(val, path);
            else if (key == "bias_current") c.sim.bias_current = expect<double>(val, path);
            else if (key == "weight_budget") c.sim.weight_budget = expect<double>(val, path);
            else if (key == "stdp_window_ms") c.sim.stdp_window_ms = expect<double>(val, path);
            else if (key == "actuator_window_ms")
                c.sim.actuator_window_ms = expect<double>(val, path);
            else if (key == "stdp_pair_full_history")
                c.sim.stdp_pair_full_history = expect<bool>(val, path);
            else bad_key(path);
        } else if (base == "environment") {
            if (key == "sample_steps") c.env.sample_steps = expect<int>(val, path);
            else if (key == "samples_per_condition")
                c.env.samples_per_condition = expect<int>(val, path);
            else if (key == "health_cycles") c.env.health_cycles = expect<double>(val, path);
            else if (key == "d_correct") c.env.damage.d_correct = expect<double>(val, path);
            else if (key == "d_incorrect") c.env.damage.d_incorrect = expect<double>(val, path);
            else if (key == "spike_target") c.env.damage.s_target = expect<int>(val, path);
            else if (key == "initial_health") c.env.damage.initial_health = expect<double>(val, path);
            else if (key == "rate_low_hz") c.env.rates.low_hz = expect<double>(val, path);
            else if (key == "rate_high_hz") c.env.rates.high_hz = expect<double>(val, path);
            else bad_key(path);
        } else if (base == "cartpole") {
            if (key == "train_sizes")
                c.cartpole.train_schedule.sizes = expect<std::vector<double>>(val, path);
            else if (key == "train_repeats")
                c.cartpole.train_schedule.repeats = expect<int>(val, path);
            else if (key == "test_sizes")
                c.cartpole.test_schedule.sizes = expect<std::vector<double>>(val, path);
            else if (key == "max_iterations") {
                c.cartpole.train_schedule.max_iterations = expect<int>(val, path);
                c.cartpole.test_schedule.max_iterations = c.cartpole.train_schedule.max_iterations;
            } else if (key == "snn_steps_per_iteration")
                c.cartpole.snn_steps_per_iteration = expect<int>(val, path);
            else if (key == "reset_perturbation")
                c.cartpole.reset_perturbation = expect<double>(val, path);
            else if (key == "gravity") c.cartpole.params.gravity = expect<double>(val, path);
            else if (key == "cart_mass") c.cartpole.params.cart_mass = expect<double>(val, path);
            else if (key == "pole_mass") c.cartpole.params.pole_mass = expect<double>(val, path);
            else if (key == "force_mag") c.cartpole.params.force_mag = expect<double>(val, path);
            else if (key == "tau") c.cartpole.params.tau = expect<double>(val, path);
            else bad_key(path);
        } else {
            bad_key(path);
        }
    }
}

RunConfig load_config_file(const std::string& file, TaskId task, const std::string& profile) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("cannot open config file: " + file);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument("config parse error at byte " + std::to_string(e.byte) +
                                    " in " + file);
    }
    RunConfig c = default_config(task, profile);
    config_apply_json(c, j);
    validate_config(c);
    return c;
}

void validate_config(const RunConfig& c) {
    const auto fail = [](const std::string& path, const std::string& why) {
        throw std::invalid_argument("invalid config value at " + path + ": " + why);
    };
    if (c.evolution.population_size < 2) fail("evolution.population_size", "must be >= 2");
    if (c.evolution.generations < 1) fail("evolution.generations", "must be >= 1");
    if (c.evolution.elitism_fraction < 0.0 || c.evolution.elitism_fraction >= 1.0)
        fail("evolution.elitism_fraction", "must be in [0, 1)");
    if (c.sim.dt_ms <= 0) fail("simulation.dt_ms", "must be > 0");
    if (c.env.sample_steps < 1) fail("environment.sample_steps", "must be >= 1");
    if (c.env.damage.d_incorrect <= c.env.damage.d_correct || c.env.damage.d_correct <= 0)
        fail("environment.d_incorrect", "needs d_incorrect > d_correct > 0");
    if (c.env.damage.s_target < 1) fail("environment.spike_target", "must be >= 1");
    if (c.env.rates.low_hz <= 0 || c.env.rates.low_hz >= c.env.rates.high_hz)
        fail("environment.rate_low_hz", "needs 0 < low < high");
    if (c.cartpole.snn_steps_per_iteration < 1)
        fail("cartpole.snn_steps_per_iteration", "must be >= 1");
    for (double s : c.cartpole.train_schedule.sizes)
        if (s <= 0) fail("cartpole.train_sizes", "sizes must be > 0");
    for (double s : c.cartpole.test_schedule.sizes)
        if (s <= 0) fail("cartpole.test_sizes", "sizes must be > 0");
}

} // namespace snnevo
