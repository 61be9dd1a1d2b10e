#ifndef SNNEVO_CARTPOLE_HPP
#define SNNEVO_CARTPOLE_HPP

#include <cstdint>
#include <vector>

#include "snnevo/encoding.hpp"
#include "snnevo/env.hpp"
#include "snnevo/rng.hpp"
#include "snnevo/sim.hpp"

namespace snnevo {

struct CartPoleState {
    double x = 0.0;
    double x_dot = 0.0;
    double theta = 0.0;
    double theta_dot = 0.0;
};

struct CartPoleParams {
    double gravity = 9.8;
    double cart_mass = 1.0;
    double pole_mass = 0.1;
    double half_length = 0.5;  // the mutable "pole size"
    double force_mag = 10.0;
    double tau = 0.02;  // integration step, seconds
    double x_limit = 2.4;
    double theta_limit_rad = 12.0 * 3.141592653589793238462643 / 180.0;
};

/// One Euler step of the classic cart-pole equations of motion.
CartPoleState physics_step(const CartPoleState& s, double force, const CartPoleParams& p);

bool cartpole_terminal(const CartPoleState& s, const CartPoleParams& p);

struct PoleSchedule {
    std::vector<double> sizes{0.5, 0.3, 0.7};
    int repeats = 3;
    int max_iterations = 200;
};

struct CartPoleConfig {
    PoleSchedule train_schedule{{0.5, 0.3, 0.7}, 3, 200};
    PoleSchedule test_schedule{{0.4, 0.6}, 1, 200};
    int snn_steps_per_iteration = 500;  // 50 ms of network time per environment iteration
    double reset_perturbation = 0.05;
    CartPoleParams params;
    ObservationEncoderConfig encoder;
    bool randomize_test_order = true;
};

enum class CartPoleMode : std::uint8_t { train, test };

constexpr int kCartPoleInputs = 12;
constexpr int kCartPoleOutputs = 2;

/// Run one cart-pole lifetime: every scheduled (size, repeat) pair runs up to
/// max_iterations with the same network carried across conditions. Fitness is
/// total balanced iterations over the schedule maximum.
LifetimeReport run_cartpole_lifetime(Network& net, const CartPoleConfig& config,
                                     CartPoleMode mode, std::uint64_t seed);

} // namespace snnevo

#endif
