#ifndef SNNEVO_ENV_HPP
#define SNNEVO_ENV_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "snnevo/encoding.hpp"
#include "snnevo/rng.hpp"
#include "snnevo/sim.hpp"

namespace snnevo {

struct DamageModel {
    double d_correct = 1.0;
    double d_incorrect = 2.0;
    int s_target = 3;
    double initial_health = 0.0;  // 0 = derive from the schedule (d_correct * cycle steps)
};

/// Confidence split of a step's output spikes between the correct and the
/// incorrect action. Both values are in [0,1] and sum to 1.
std::pair<double, double> spike_participation(int s_correct, int s_incorrect, int s_target);

/// Per-step health loss. Zero spikes on both outputs costs d_incorrect.
double damage(int s_correct, int s_incorrect, const DamageModel& model);

/// Lifetime length normalized to [0,1]. Throws on a t outside [l_min, l_max].
double fitness_from_lifetime(std::int64_t t, std::int64_t l_min, std::int64_t l_max);

// ---------------------------------------------------------------------------
// task truth tables

enum class EdibleSet : std::uint8_t { black = 0, white = 1, none = 2, both = 3 };
enum class FoodColor : std::uint8_t { black = 0, white = 1 };
constexpr int kActionEat = 0;
constexpr int kActionAvoid = 1;

int correct_food_action(EdibleSet edible, FoodColor input);
const char* edible_set_name(EdibleSet e);
const char* food_color_name(FoodColor c);

enum class Gate : std::uint8_t {
    gate_a = 0,
    gate_b,
    gate_not_a,
    gate_not_b,
    gate_only0,
    gate_only1,
    gate_xor,
    gate_xnor,
    gate_and,
    gate_nand,
    gate_or,
    gate_nor,
};

int correct_gate_output(Gate gate, int a, int b);
const char* gate_name(Gate g);
const std::vector<Gate>& training_gates();
const std::vector<Gate>& testing_gates();

// ---------------------------------------------------------------------------
// mutable binary-classification environments

struct BinaryEnvConfig {
    int sample_steps = 10000;
    int samples_per_condition = 4;
    // default health = d_correct * health_cycles * one condition cycle; the
    // schedule keeps cycling until health runs out
    double health_cycles = 2.0;
    DamageModel damage;
    RateRange rates;
    bool randomize_condition_order = false;  // test simulations shuffle the schedule
};

struct SampleTrace {
    int condition = 0;          // condition index into the environment's schedule naming
    std::array<int, 2> bits{};  // presented input bits (food uses bits[0] only)
    int action_at_end = kNoAction;
    int correct = 0;
};

struct LifetimeReport {
    std::int64_t survived_steps = 0;
    double fitness = 0.0;
    double accuracy = 0.0;
    double eos_accuracy = 0.0;
    std::vector<SampleTrace> samples;
    std::vector<std::int64_t> condition_steps;  // cart-pole: balanced steps per condition run
    std::string input_order;
    std::string environment_order;
};

/// Stepwise mutable environment for the food-foraging and logic-gate tasks.
/// The caller supplies the decoded action and the actuator spike counts each
/// step; the environment owns schedule, health, damage and metrics.
class BinaryEnv {
public:
    enum class Task : std::uint8_t { food, logic_train, logic_test };

    BinaryEnv(Task task, const BinaryEnvConfig& config, std::uint64_t seed);

    Task task() const { return task_; }
    int bit_count() const { return task_ == Task::food ? 1 : 2; }
    int input_channels() const { return 2 * bit_count() + 2; }
    static constexpr int output_channels() { return 2; }

    std::int64_t l_max() const { return l_max_; }
    std::int64_t l_min() const { return l_min_; }
    const RateRange& rates() const { return config_.rates; }

    bool done() const;
    bool sample_start() const { return step_in_sample_ == 0; }
    bool sample_end() const { return step_in_sample_ == config_.sample_steps - 1; }
    std::array<int, 2> current_bits() const { return bits_; }
    int correct_action() const { return correct_; }
    int condition_index() const { return static_cast<int>(sample_index_) / config_.samples_per_condition; }

    /// Advance one step. Returns true while the agent is alive and the
    /// schedule has more steps. `was_correct` of the step is readable after.
    bool apply(int action, std::array<int, 2> output_counts);
    bool last_step_correct() const { return last_correct_; }

    LifetimeReport report() const;

    std::string environment_order_string() const;
    std::string input_order_string() const;

private:
    void load_sample();

    Task task_;
    BinaryEnvConfig config_;
    std::vector<int> condition_order_;   // indices into the task's condition list
    std::vector<std::array<int, 2>> input_cycle_;
    double health_ = 0.0;
    std::int64_t l_max_ = 0;
    std::int64_t l_min_ = 0;

    std::int64_t sample_index_ = 0;
    int step_in_sample_ = 0;
    std::int64_t total_samples_ = 0;
    std::array<int, 2> bits_{};
    int correct_ = 0;
    bool last_correct_ = false;

    std::int64_t survived_ = 0;
    std::int64_t correct_steps_ = 0;
    std::int64_t eos_samples_ = 0;
    std::int64_t eos_correct_ = 0;
    std::vector<SampleTrace> trace_;
};

/// Feedback channel rates: exactly one of reward/penalty is high per step.
inline std::pair<double, double> feedback_rates(bool was_correct, const RateRange& r) {
    return was_correct ? std::pair{r.high_hz, r.low_hz} : std::pair{r.low_hz, r.high_hz};
}

/// Drive a network through a binary-classification lifetime: rate-coded
/// inputs plus reward/penalty feedback in, actuator window counts out.
/// phase_seed randomizes the per-channel spike-train phases each sample.
LifetimeReport run_lifetime(Network& net, BinaryEnv& env, const SimParams& params,
                            std::uint64_t phase_seed = 0);

} // namespace snnevo

#endif
