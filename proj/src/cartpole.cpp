#include "snnevo/cartpole.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace snnevo {

CartPoleState physics_step(const CartPoleState& s, double force, const CartPoleParams& p) {
    const double total_mass = p.cart_mass + p.pole_mass;
    const double polemass_length = p.pole_mass * p.half_length;
    const double cos_t = std::cos(s.theta);
    const double sin_t = std::sin(s.theta);

    const double temp = (force + polemass_length * s.theta_dot * s.theta_dot * sin_t) / total_mass;
    const double theta_acc =
        (p.gravity * sin_t - cos_t * temp) /
        (p.half_length * (4.0 / 3.0 - p.pole_mass * cos_t * cos_t / total_mass));
    const double x_acc = temp - polemass_length * theta_acc * cos_t / total_mass;

    CartPoleState out;
    out.x = s.x + p.tau * s.x_dot;
    out.x_dot = s.x_dot + p.tau * x_acc;
    out.theta = s.theta + p.tau * s.theta_dot;
    out.theta_dot = s.theta_dot + p.tau * theta_acc;
    return out;
}

bool cartpole_terminal(const CartPoleState& s, const CartPoleParams& p) {
    return std::fabs(s.x) > p.x_limit || std::fabs(s.theta) > p.theta_limit_rad;
}

LifetimeReport run_cartpole_lifetime(Network& net, const CartPoleConfig& config,
                                     CartPoleMode mode, std::uint64_t seed) {
    if (net.num_inputs() != kCartPoleInputs || net.num_outputs() != kCartPoleOutputs)
        throw std::invalid_argument(
            "network interface does not match cart-pole: expected 12 inputs and 2 outputs");

    Rng rng(seed);
    const PoleSchedule& sched =
        mode == CartPoleMode::train ? config.train_schedule : config.test_schedule;

    // repeats grouped per size; the test order may be shuffled per lifetime
    std::vector<double> runs;
    std::vector<double> size_order = sched.sizes;
    if (mode == CartPoleMode::test && config.randomize_test_order) {
        for (int i = static_cast<int>(size_order.size()) - 1; i > 0; --i)
            std::swap(size_order[i], size_order[rng.index(i + 1)]);
    }
    for (double size : size_order)
        for (int r = 0; r < sched.repeats; ++r) runs.push_back(size);

    LifetimeReport report;
    std::vector<SpikeTrainGenerator> gens(kCartPoleInputs, SpikeTrainGenerator(net.params().dt_ms));
    ActionDecoder decoder;
    std::vector<std::uint8_t> spikes(kCartPoleInputs, 0);
    std::int64_t t = net.clock().step_index;
    std::int64_t total_steps = 0;

    for (std::size_t run = 0; run < runs.size(); ++run) {
        CartPoleParams params = config.params;
        params.half_length = runs[run];

        CartPoleState state;
        state.x = rng.uniform(-config.reset_perturbation, config.reset_perturbation);
        state.x_dot = rng.uniform(-config.reset_perturbation, config.reset_perturbation);
        state.theta = rng.uniform(-config.reset_perturbation, config.reset_perturbation);
        state.theta_dot = rng.uniform(-config.reset_perturbation, config.reset_perturbation);

        std::int64_t balanced = 0;
        for (int iter = 0; iter < sched.max_iterations; ++iter) {
            const auto rates = observation_to_rates(
                {state.x, state.x_dot, state.theta, state.theta_dot}, config.encoder);
            for (int c = 0; c < kCartPoleInputs; ++c) {
                // fresh phase per rate change keeps the channels out of lockstep
                const std::int64_t phase = static_cast<std::int64_t>(rng.uniform_int(4096));
                gens[c].set_rate(rates[c], t, phase);
            }

            for (int s = 0; s < config.snn_steps_per_iteration; ++s) {
                for (int c = 0; c < kCartPoleInputs; ++c) spikes[c] = gens[c].step(t) ? 1 : 0;
                net.step(spikes);
                ++t;
            }

            const std::array<int, 2> counts{net.actuator_count(0), net.actuator_count(1)};
            const int action = decoder.decide(counts);
            const double force = action == kNoAction
                                     ? 0.0
                                     : (action == 0 ? -params.force_mag : params.force_mag);
            state = physics_step(state, force, params);
            ++balanced;
            if (cartpole_terminal(state, params)) break;
        }
        report.condition_steps.push_back(balanced);
        total_steps += balanced;

        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", runs[run]);
        if (!report.environment_order.empty()) report.environment_order += ", ";
        report.environment_order += buf;
    }

    const std::int64_t t_max =
        static_cast<std::int64_t>(runs.size()) * sched.max_iterations;
    report.survived_steps = total_steps;
    report.fitness = t_max > 0 ? static_cast<double>(total_steps) / t_max : 0.0;
    return report;
}

} // namespace snnevo
