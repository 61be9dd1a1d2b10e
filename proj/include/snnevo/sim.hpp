#ifndef SNNEVO_SIM_HPP
#define SNNEVO_SIM_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "snnevo/plasticity.hpp"

namespace snnevo {

enum class Neurotransmitter : std::uint8_t { excitatory = 0, inhibitory = 1 };

struct SimParams {
    double dt_ms = 0.1;
    // decay factor 0.01 * dt at dt = 0.1 ms: a 100 ms membrane time constant
    double membrane_decay_per_step = 0.001;
    double theta_decay_per_step = 0.001;
    double resting_threshold = 1.0;
    double theta_increment = 0.2;
    double bias_current = 0.001;
    double w_min = 0.0;
    double w_max = 1.0;
    double weight_budget = 5.0;
    double stdp_window_ms = 40.0;
    double actuator_window_ms = 250.0;
    // pair arriving spikes against the full output history in the window, or
    // against the most recent output spike only
    bool stdp_pair_full_history = true;

    std::int64_t stdp_window_steps() const {
        return static_cast<std::int64_t>(std::llround(stdp_window_ms / dt_ms));
    }
    std::int64_t actuator_window_steps() const {
        return static_cast<std::int64_t>(std::llround(actuator_window_ms / dt_ms));
    }
};

struct SimClock {
    std::int64_t step_index = 0;
    double dt_ms = 0.1;
    double now_ms() const { return static_cast<double>(step_index) * dt_ms; }
};

/// State of one simulated (hidden or output) neuron. Input nodes are spike
/// generators and carry no state.
struct NeuronState {
    double membrane_v = 0.0;
    double theta = 0.0;
    Neurotransmitter nt = Neurotransmitter::excitatory;
    bool bias_enabled = false;
    LearningRule rule;
};

/// Monotone spike-time list with a trailing-window trim. Backed by a vector
/// with a head offset; compacts lazily. A capacity cap keeps runaway-rate
/// neurons (thousands of spikes inside one window) from blowing up the STDP
/// pairing cost: only the most recent `cap` spikes are retained.
class SpikeHistory {
public:
    explicit SpikeHistory(std::size_t cap = 0) : cap_(cap) {}

    void push(std::int64_t t) {
        times_.push_back(t);
        if (cap_ != 0 && size() > cap_) ++head_;
        maybe_compact();
    }

    // drop every timestamp strictly below cutoff
    void trim_before(std::int64_t cutoff) {
        while (head_ < times_.size() && times_[head_] < cutoff) ++head_;
        maybe_compact();
    }

    std::size_t size() const { return times_.size() - head_; }
    bool empty() const { return size() == 0; }
    std::int64_t operator[](std::size_t i) const { return times_[head_ + i]; }
    void clear() { times_.clear(); head_ = 0; }

private:
    void maybe_compact() {
        if (head_ > 256 && head_ * 2 > times_.size()) {
            times_.erase(times_.begin(), times_.begin() + static_cast<std::ptrdiff_t>(head_));
            head_ = 0;
        }
    }

    std::vector<std::int64_t> times_;
    std::size_t head_ = 0;
    std::size_t cap_ = 0;
};

/// Most recent spikes kept for STDP pairing per synapse and per neuron.
inline constexpr std::size_t kStdpHistoryCap = 64;

/// Effective firing threshold under homeostasis.
double effective_threshold(const NeuronState& n, double incoming_weight_sum,
                           double resting_threshold = 1.0);

/// Scale weights down proportionally when their sum exceeds the budget.
void normalize_weight_budget(std::span<double> weights, double budget);

struct SynapseInit {
    int pre = 0;   // unified node index: [0, n_inputs) inputs, then neurons
    int post = 0;  // neuron ordinal (index into the neuron array)
    double weight = 0.0;
};

/// Discrete-time spiking network with plastic synapses.
///
/// Node indexing is unified: indices [0, n_inputs) are the input generators,
/// index n_inputs + j is neuron j. Spikes propagate synchronously: a neuron
/// sees the previous step's neuron spikes and the current step's input
/// spikes, so results do not depend on neuron iteration order.
class Network {
public:
    Network(int n_inputs, std::vector<NeuronState> neurons, std::vector<int> output_ordinals,
            const std::vector<SynapseInit>& synapses, const SimParams& params,
            std::vector<int> node_gene_ids = {});

    int num_inputs() const { return n_in_; }
    int num_neurons() const { return static_cast<int>(neurons_.size()); }
    int num_outputs() const { return static_cast<int>(outputs_.size()); }
    int num_synapses() const { return static_cast<int>(syn_pre_.size()); }

    const SimParams& params() const { return params_; }
    const SimClock& clock() const { return clock_; }

    /// Advance one step. input_spikes has one flag per input node.
    void step(std::span<const std::uint8_t> input_spikes);

    /// Did output k fire on the last completed step?
    bool output_spiked(int output_idx) const;

    /// Spikes of output k within the trailing actuator window.
    int actuator_count(int output_idx) const;

    /// Sum of incoming synapse weights of neuron j.
    double incoming_weight_sum(int neuron_idx) const;

    const NeuronState& neuron(int idx) const { return neurons_[idx]; }
    int neuron_gene_id(int idx) const { return node_ids_.empty() ? idx : node_ids_[n_in_ + idx]; }

    // flat synapse views (grouped by postsynaptic neuron)
    std::span<const double> weights() const { return syn_weight_; }
    std::span<const int> synapse_pre() const { return syn_pre_; }
    std::span<const int> synapse_post() const { return syn_post_; }
    double weight(int synapse_idx) const { return syn_weight_[synapse_idx]; }

private:
    struct Range {
        int begin = 0;
        int end = 0;
    };

    void stdp_on_arrivals(int j, const int* arrived, int n_arrived, std::int64_t now);
    void stdp_on_fire(int j, std::int64_t now);
    void renormalize_incoming(int j);

    SimParams params_;
    SimClock clock_;
    int n_in_ = 0;
    std::int64_t stdp_steps_ = 0;
    std::int64_t window_steps_ = 0;

    std::vector<NeuronState> neurons_;
    std::vector<int> outputs_;    // neuron ordinals of the output neurons
    std::vector<int> node_ids_;   // optional genome ids per unified index

    // synapses in post-major order
    std::vector<int> syn_pre_;
    std::vector<int> syn_post_;
    std::vector<double> syn_weight_;
    std::vector<std::int8_t> syn_sign_;
    std::vector<SpikeHistory> syn_in_times_;
    std::vector<Range> incoming_;  // per neuron, range into the synapse arrays
    std::vector<std::vector<int>> out_adj_;  // per unified node, its outgoing synapses
    std::vector<double> wsum_;               // per neuron, cached incoming weight sum

    std::vector<SpikeHistory> out_times_;  // per neuron, for STDP pairing
    std::vector<SpikeHistory> actuator_;   // per output, for the actuator window
    std::vector<std::uint8_t> spiked_prev_;  // per neuron
    std::vector<std::uint8_t> spiked_cur_;
    int prev_spike_count_ = 0;
    std::vector<double> drive_;              // per neuron, accumulated this step
    std::vector<std::vector<int>> arrivals_; // per neuron, synapses that spiked in
    std::vector<int> active_posts_;
};

} // namespace snnevo

#endif
