#include "snnevo/env.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace snnevo {

std::pair<double, double> spike_participation(int s_correct, int s_incorrect, int s_target) {
    if (s_correct < 0 || s_incorrect < 0) throw std::invalid_argument("negative spike count");
    double p_c;
    if (s_correct + s_incorrect <= 2 * s_target) {
        p_c = static_cast<double>(std::min(s_correct, s_target) - std::min(s_incorrect, s_target) +
                                  s_target) /
              (2.0 * s_target);
    } else {
        p_c = static_cast<double>(s_correct) / (s_correct + s_incorrect);
    }
    return {p_c, 1.0 - p_c};
}

double damage(int s_correct, int s_incorrect, const DamageModel& model) {
    if (s_correct == 0 && s_incorrect == 0) return model.d_incorrect;
    const auto [p_c, p_i] = spike_participation(s_correct, s_incorrect, model.s_target);
    return model.d_correct * p_c + model.d_incorrect * p_i;
}

double fitness_from_lifetime(std::int64_t t, std::int64_t l_min, std::int64_t l_max) {
    if (l_min >= l_max) throw std::invalid_argument("l_min must be below l_max");
    if (t < l_min || t > l_max)
        throw std::out_of_range("lifetime outside [l_min, l_max]");
    return static_cast<double>(t - l_min) / static_cast<double>(l_max - l_min);
}

int correct_food_action(EdibleSet edible, FoodColor input) {
    switch (edible) {
        case EdibleSet::black: return input == FoodColor::black ? kActionEat : kActionAvoid;
        case EdibleSet::white: return input == FoodColor::white ? kActionEat : kActionAvoid;
        case EdibleSet::none: return kActionAvoid;
        case EdibleSet::both: return kActionEat;
    }
    throw std::invalid_argument("bad edible set");
}

const char* edible_set_name(EdibleSet e) {
    switch (e) {
        case EdibleSet::black: return "black";
        case EdibleSet::white: return "white";
        case EdibleSet::none: return "none";
        case EdibleSet::both: return "both";
    }
    return "?";
}

const char* food_color_name(FoodColor c) {
    return c == FoodColor::black ? "black" : "white";
}

int correct_gate_output(Gate gate, int a, int b) {
    switch (gate) {
        case Gate::gate_a: return a;
        case Gate::gate_b: return b;
        case Gate::gate_not_a: return 1 - a;
        case Gate::gate_not_b: return 1 - b;
        case Gate::gate_only0: return 0;
        case Gate::gate_only1: return 1;
        case Gate::gate_xor: return a ^ b;
        case Gate::gate_xnor: return 1 - (a ^ b);
        case Gate::gate_and: return a & b;
        case Gate::gate_nand: return 1 - (a & b);
        case Gate::gate_or: return a | b;
        case Gate::gate_nor: return 1 - (a | b);
    }
    throw std::invalid_argument("bad gate");
}

const char* gate_name(Gate g) {
    switch (g) {
        case Gate::gate_a: return "A";
        case Gate::gate_b: return "B";
        case Gate::gate_not_a: return "NOT A";
        case Gate::gate_not_b: return "NOT B";
        case Gate::gate_only0: return "ONLY 0";
        case Gate::gate_only1: return "ONLY 1";
        case Gate::gate_xor: return "XOR";
        case Gate::gate_xnor: return "XNOR";
        case Gate::gate_and: return "AND";
        case Gate::gate_nand: return "NAND";
        case Gate::gate_or: return "OR";
        case Gate::gate_nor: return "NOR";
    }
    return "?";
}

const std::vector<Gate>& training_gates() {
    static const std::vector<Gate> gates{Gate::gate_a,     Gate::gate_b,    Gate::gate_not_a,
                                         Gate::gate_not_b, Gate::gate_only0, Gate::gate_only1,
                                         Gate::gate_xor,   Gate::gate_xnor};
    return gates;
}

const std::vector<Gate>& testing_gates() {
    static const std::vector<Gate> gates{Gate::gate_and, Gate::gate_nand, Gate::gate_or,
                                         Gate::gate_nor};
    return gates;
}

// ---------------------------------------------------------------------------

BinaryEnv::BinaryEnv(Task task, const BinaryEnvConfig& config, std::uint64_t seed)
    : task_(task), config_(config) {
    Rng rng(seed);

    const int n_conditions = task_ == Task::food ? 4
                             : task_ == Task::logic_train
                                 ? static_cast<int>(training_gates().size())
                                 : static_cast<int>(testing_gates().size());
    condition_order_.resize(n_conditions);
    std::iota(condition_order_.begin(), condition_order_.end(), 0);
    if (config_.randomize_condition_order) {
        for (int i = n_conditions - 1; i > 0; --i)
            std::swap(condition_order_[i], condition_order_[rng.index(i + 1)]);
    }

    if (task_ == Task::food) {
        // alternate the two colors, starting phase from the lifetime seed
        const int first = rng.chance(0.5) ? 0 : 1;
        input_cycle_ = {{first, 0}, {1 - first, 0}};
    } else {
        input_cycle_ = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
        for (int i = 3; i > 0; --i)
            std::swap(input_cycle_[i], input_cycle_[rng.index(i + 1)]);
    }

    const std::int64_t cycle_steps = static_cast<std::int64_t>(n_conditions) *
                                     config_.samples_per_condition * config_.sample_steps;
    health_ = config_.damage.initial_health > 0.0
                  ? config_.damage.initial_health
                  : config_.damage.d_correct * config_.health_cycles * cycle_steps;
    l_max_ = static_cast<std::int64_t>(health_ / config_.damage.d_correct);
    l_min_ = static_cast<std::int64_t>(health_ / config_.damage.d_incorrect);
    total_samples_ = (l_max_ + config_.sample_steps - 1) / config_.sample_steps;

    load_sample();
}

void BinaryEnv::load_sample() {
    const int cond_pos = static_cast<int>(sample_index_ / config_.samples_per_condition) %
                         static_cast<int>(condition_order_.size());
    const int cond = condition_order_[cond_pos];
    bits_ = input_cycle_[sample_index_ % input_cycle_.size()];
    if (task_ == Task::food) {
        correct_ = correct_food_action(static_cast<EdibleSet>(cond),
                                       static_cast<FoodColor>(bits_[0]));
    } else {
        const Gate gate = task_ == Task::logic_train ? training_gates()[cond]
                                                     : testing_gates()[cond];
        const int out = correct_gate_output(gate, bits_[0], bits_[1]);
        correct_ = out;  // output ordinal: actuator 0 means "0", actuator 1 means "1"
    }
}

bool BinaryEnv::done() const {
    return health_ <= 0.0 || sample_index_ >= total_samples_;
}

bool BinaryEnv::apply(int action, std::array<int, 2> counts) {
    if (done()) return false;

    last_correct_ = action == correct_;
    const int s_c = counts[correct_];
    const int s_i = counts[1 - correct_];
    health_ -= damage(s_c, s_i, config_.damage);
    ++survived_;
    if (last_correct_) ++correct_steps_;

    if (sample_end()) {
        ++eos_samples_;
        if (last_correct_) ++eos_correct_;
        const int cond_pos = static_cast<int>(sample_index_ / config_.samples_per_condition) %
                             static_cast<int>(condition_order_.size());
        trace_.push_back(SampleTrace{condition_order_[cond_pos], bits_, action, correct_});
    }

    ++step_in_sample_;
    if (step_in_sample_ >= config_.sample_steps) {
        step_in_sample_ = 0;
        ++sample_index_;
        if (sample_index_ < total_samples_) load_sample();
    }
    return !done();
}

LifetimeReport BinaryEnv::report() const {
    LifetimeReport r;
    r.survived_steps = survived_;
    r.fitness = fitness_from_lifetime(std::clamp(survived_, l_min_, l_max_), l_min_, l_max_);
    r.accuracy = survived_ > 0 ? static_cast<double>(correct_steps_) / survived_ : 0.0;
    r.eos_accuracy = eos_samples_ > 0 ? static_cast<double>(eos_correct_) / eos_samples_ : 0.0;
    r.samples = trace_;
    r.input_order = input_order_string();
    r.environment_order = environment_order_string();
    return r;
}

std::string BinaryEnv::environment_order_string() const {
    std::string s;
    for (std::size_t i = 0; i < condition_order_.size(); ++i) {
        if (i) s += ", ";
        if (task_ == Task::food) {
            s += edible_set_name(static_cast<EdibleSet>(condition_order_[i]));
        } else {
            const Gate g = task_ == Task::logic_train ? training_gates()[condition_order_[i]]
                                                      : testing_gates()[condition_order_[i]];
            s += gate_name(g);
        }
    }
    return s;
}

std::string BinaryEnv::input_order_string() const {
    std::string s;
    for (std::size_t i = 0; i < input_cycle_.size(); ++i) {
        if (i) s += ", ";
        if (task_ == Task::food) {
            s += food_color_name(static_cast<FoodColor>(input_cycle_[i][0]));
        } else {
            s += "(" + std::to_string(input_cycle_[i][0]) + ", " +
                 std::to_string(input_cycle_[i][1]) + ")";
        }
    }
    return s;
}

// ---------------------------------------------------------------------------

LifetimeReport run_lifetime(Network& net, BinaryEnv& env, const SimParams& params,
                            std::uint64_t phase_seed) {
    const int n_bits = env.bit_count();
    const int n_channels = env.input_channels();
    if (net.num_inputs() != n_channels || net.num_outputs() != 2)
        throw std::invalid_argument("network interface does not match the environment: expected " +
                                    std::to_string(n_channels) + " inputs and 2 outputs");

    std::vector<SpikeTrainGenerator> gens(n_channels, SpikeTrainGenerator(params.dt_ms));
    const int reward_ch = 2 * n_bits;
    const int penalty_ch = 2 * n_bits + 1;
    const RateRange& rr = env.rates();
    Rng phase_rng(phase_seed);

    ActionDecoder decoder;
    std::vector<std::uint8_t> spikes(n_channels, 0);
    std::array<int, 2> counts{};
    std::int64_t t = 0;
    // no action yet counts as incorrect, so the penalty channel starts high
    bool was_correct = false;

    while (!env.done()) {
        if (env.sample_start()) {
            const auto bits = env.current_bits();
            for (int b = 0; b < n_bits; ++b) {
                const auto [hi_first, lo_second] = binary_to_rates(bits[b], rr);
                gens[2 * b].set_rate(hi_first, t);
                gens[2 * b + 1].set_rate(lo_second, t);
            }
            const auto [reward_rate, penalty_rate] = feedback_rates(was_correct, rr);
            gens[reward_ch].set_rate(reward_rate, t);
            gens[penalty_ch].set_rate(penalty_rate, t);
            // fresh per-channel phases: equal-rate channels must not run in
            // lockstep, or the outputs tie forever
            for (auto& g : gens) {
                const std::int64_t period = g.period_steps();
                g.reset_phase(t, period > 0 ? static_cast<std::int64_t>(
                                                  phase_rng.uniform_int(period))
                                            : 0);
            }
        }

        for (int c = 0; c < n_channels; ++c) spikes[c] = gens[c].step(t) ? 1 : 0;
        net.step(spikes);
        counts = {net.actuator_count(0), net.actuator_count(1)};
        const int action = decoder.decide(counts);
        env.apply(action, counts);
        was_correct = env.last_step_correct();

        // feedback flips mid-sample take effect on the next step
        const auto [reward_rate, penalty_rate] = feedback_rates(was_correct, rr);
        gens[reward_ch].set_rate(reward_rate, t + 1);
        gens[penalty_ch].set_rate(penalty_rate, t + 1);
        ++t;
    }
    return env.report();
}

} // namespace snnevo
