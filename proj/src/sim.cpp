#include "snnevo/sim.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace snnevo {

double effective_threshold(const NeuronState& n, double incoming_weight_sum,
                           double resting_threshold) {
    return std::min(resting_threshold + n.theta, incoming_weight_sum);
}

void normalize_weight_budget(std::span<double> weights, double budget) {
    double sum = 0.0;
    for (double w : weights) sum += w;
    if (sum > budget) {
        const double scale = budget / sum;
        for (double& w : weights) w *= scale;
    }
}

Network::Network(int n_inputs, std::vector<NeuronState> neurons, std::vector<int> output_ordinals,
                 const std::vector<SynapseInit>& synapses, const SimParams& params,
                 std::vector<int> node_gene_ids)
    : params_(params),
      n_in_(n_inputs),
      neurons_(std::move(neurons)),
      outputs_(std::move(output_ordinals)),
      node_ids_(std::move(node_gene_ids)) {
    clock_.dt_ms = params_.dt_ms;
    stdp_steps_ = params_.stdp_window_steps();
    window_steps_ = params_.actuator_window_steps();

    const int n_neurons = static_cast<int>(neurons_.size());
    const int n_nodes = n_in_ + n_neurons;
    for (int o : outputs_) {
        if (o < 0 || o >= n_neurons) throw std::invalid_argument("output ordinal out of range");
        if (neurons_[o].nt != Neurotransmitter::excitatory)
            throw std::invalid_argument("output neurons must be excitatory");
    }

    // group synapses by postsynaptic neuron, stable in pre order
    std::vector<int> order(synapses.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return synapses[a].post < synapses[b].post;
    });

    syn_pre_.reserve(synapses.size());
    syn_post_.reserve(synapses.size());
    syn_weight_.reserve(synapses.size());
    syn_sign_.reserve(synapses.size());
    incoming_.assign(n_neurons, {});
    for (int idx : order) {
        const SynapseInit& s = synapses[idx];
        if (s.pre < 0 || s.pre >= n_nodes) throw std::invalid_argument("synapse pre out of range");
        if (s.post < 0 || s.post >= n_neurons)
            throw std::invalid_argument("synapse post out of range");
        // initial weights may exceed w_max (the draw is centered on the
        // threshold); STDP clamps them into range as events arrive
        if (s.weight < params_.w_min)
            throw std::invalid_argument("synapse weight below w_min");
        syn_pre_.push_back(s.pre);
        syn_post_.push_back(s.post);
        syn_weight_.push_back(s.weight);
        const bool inhib = s.pre >= n_in_ &&
                           neurons_[s.pre - n_in_].nt == Neurotransmitter::inhibitory;
        syn_sign_.push_back(inhib ? -1 : 1);
    }
    syn_in_times_.assign(syn_pre_.size(), SpikeHistory(kStdpHistoryCap));
    {
        int k = 0;
        const int n_syn = static_cast<int>(syn_post_.size());
        for (int j = 0; j < n_neurons; ++j) {
            incoming_[j].begin = k;
            while (k < n_syn && syn_post_[k] == j) ++k;
            incoming_[j].end = k;
        }
    }
    // duplicate-edge check
    for (std::size_t k = 1; k < syn_pre_.size(); ++k) {
        if (syn_post_[k] == syn_post_[k - 1] && syn_pre_[k] == syn_pre_[k - 1])
            throw std::invalid_argument("duplicate synapse between the same node pair");
    }

    out_adj_.resize(n_nodes);
    for (std::size_t k = 0; k < syn_pre_.size(); ++k)
        out_adj_[syn_pre_[k]].push_back(static_cast<int>(k));

    // the weight budget holds from construction on
    wsum_.assign(n_neurons, 0.0);
    for (int j = 0; j < n_neurons; ++j) renormalize_incoming(j);

    out_times_.assign(n_neurons, SpikeHistory(kStdpHistoryCap));
    actuator_.resize(outputs_.size());  // exact: the actuator count is uncapped
    spiked_prev_.assign(n_neurons, 0);
    spiked_cur_.assign(n_neurons, 0);
    drive_.assign(n_neurons, 0.0);
    arrivals_.resize(n_neurons);
}

double Network::incoming_weight_sum(int j) const { return wsum_[j]; }

void Network::renormalize_incoming(int j) {
    const Range r = incoming_[j];
    normalize_weight_budget(std::span<double>(syn_weight_.data() + r.begin,
                                              static_cast<std::size_t>(r.end - r.begin)),
                            params_.weight_budget);
    double sum = 0.0;
    for (int k = r.begin; k < r.end; ++k) sum += syn_weight_[k];
    wsum_[j] = sum;
}

void Network::stdp_on_arrivals(int j, const int* arrived, int n_arrived, std::int64_t now) {
    const LearningRule& rule = neurons_[j].rule;
    SpikeHistory& outs = out_times_[j];
    outs.trim_before(now - stdp_steps_);
    if (outs.empty()) return;
    const std::size_t first = params_.stdp_pair_full_history ? 0 : outs.size() - 1;
    for (int a = 0; a < n_arrived; ++a) {
        const int k = arrived[a];
        double w = syn_weight_[k];
        for (std::size_t i = first; i < outs.size(); ++i) {
            const double dt_r = static_cast<double>(outs[i] - now) * params_.dt_ms;
            w += delta_w(rule, dt_r);
        }
        syn_weight_[k] = std::clamp(w, params_.w_min, params_.w_max);
    }
    renormalize_incoming(j);
}

void Network::stdp_on_fire(int j, std::int64_t now) {
    const LearningRule& rule = neurons_[j].rule;
    const Range r = incoming_[j];
    for (int k = r.begin; k < r.end; ++k) {
        SpikeHistory& ins = syn_in_times_[k];
        ins.trim_before(now - stdp_steps_);
        if (ins.empty()) continue;
        double w = syn_weight_[k];
        for (std::size_t i = 0; i < ins.size(); ++i) {
            const double dt_r = static_cast<double>(now - ins[i]) * params_.dt_ms;
            w += delta_w(rule, dt_r);
        }
        syn_weight_[k] = std::clamp(w, params_.w_min, params_.w_max);
    }
    renormalize_incoming(j);
}

void Network::step(std::span<const std::uint8_t> input_spikes) {
    if (static_cast<int>(input_spikes.size()) != n_in_)
        throw std::invalid_argument("input spike vector size mismatch");

    const std::int64_t now = clock_.step_index;
    const int n_neurons = static_cast<int>(neurons_.size());

    // deliver spikes along the firing nodes' outgoing synapses: inputs fire
    // this step, neurons fired the previous step
    const auto deliver = [&](int node) {
        for (int k : out_adj_[node]) {
            const int post = syn_post_[k];
            drive_[post] += static_cast<double>(syn_sign_[k]) * syn_weight_[k];
            syn_in_times_[k].push(now);
            if (arrivals_[post].empty()) active_posts_.push_back(post);
            arrivals_[post].push_back(k);
        }
    };
    for (int c = 0; c < n_in_; ++c)
        if (input_spikes[c]) deliver(c);
    if (prev_spike_count_ > 0) {
        for (int j = 0; j < n_neurons; ++j)
            if (spiked_prev_[j]) deliver(n_in_ + j);
    }

    for (int post : active_posts_) {
        stdp_on_arrivals(post, arrivals_[post].data(), static_cast<int>(arrivals_[post].size()),
                         now);
        arrivals_[post].clear();
    }
    active_posts_.clear();

    int new_spike_count = 0;
    for (int j = 0; j < n_neurons; ++j) {
        NeuronState& n = neurons_[j];
        n.theta *= 1.0 - params_.theta_decay_per_step;
        n.membrane_v = n.membrane_v * (1.0 - params_.membrane_decay_per_step) + drive_[j] +
                       (n.bias_enabled ? params_.bias_current : 0.0);
        drive_[j] = 0.0;

        const double threshold = effective_threshold(n, wsum_[j], params_.resting_threshold);
        if (n.membrane_v > threshold) {
            spiked_cur_[j] = 1;
            ++new_spike_count;
            n.membrane_v = 0.0;
            n.theta += params_.theta_increment;
            out_times_[j].push(now);
            stdp_on_fire(j, now);
        } else {
            spiked_cur_[j] = 0;
        }
    }

    std::swap(spiked_prev_, spiked_cur_);
    prev_spike_count_ = new_spike_count;
    for (std::size_t o = 0; o < outputs_.size(); ++o) {
        if (spiked_prev_[outputs_[o]]) actuator_[o].push(now);
    }
    ++clock_.step_index;
}

bool Network::output_spiked(int output_idx) const {
    if (output_idx < 0 || output_idx >= static_cast<int>(outputs_.size()))
        throw std::out_of_range("unknown output index");
    return spiked_prev_[outputs_[output_idx]] != 0;
}

int Network::actuator_count(int output_idx) const {
    if (output_idx < 0 || output_idx >= static_cast<int>(outputs_.size()))
        throw std::out_of_range("unknown output index");
    // trailing window (now - W, now], where now is the last completed step
    const std::int64_t now = clock_.step_index - 1;
    SpikeHistory& h = const_cast<SpikeHistory&>(actuator_[output_idx]);
    h.trim_before(now - window_steps_ + 1);
    return static_cast<int>(h.size());
}

} // namespace snnevo
