#include "snnevo/genome.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace snnevo {

const NodeGene* Genome::find_node(int id) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                               [](const NodeGene& n, int v) { return n.id < v; });
    return (it != nodes.end() && it->id == id) ? &*it : nullptr;
}

const ConnectionGene* Genome::find_connection(int from, int to) const {
    for (const ConnectionGene& c : connections)
        if (c.from == from && c.to == to) return &c;
    return nullptr;
}

int Genome::max_innovation() const {
    return connections.empty() ? -1 : connections.back().innovation;
}

int Genome::count_enabled() const {
    int n = 0;
    for (const ConnectionGene& c : connections) n += c.enabled ? 1 : 0;
    return n;
}

int InnovationRegistry::edge_innovation(int from, int to) {
    auto [it, inserted] = edge_innov_.try_emplace({from, to}, next_innovation_);
    if (inserted) ++next_innovation_;
    return it->second;
}

InnovationRegistry::SplitRecord InnovationRegistry::split_innovation(int connection_innovation,
                                                                     const Genome& genome) {
    auto& records = splits_[connection_innovation];
    for (const SplitRecord& r : records) {
        if (!genome.has_node(r.node_id)) return r;
    }
    // the two half-connections take pair-keyed innovations from edge_innovation
    SplitRecord r;
    r.node_id = next_node_id_++;
    records.push_back(r);
    return records.back();
}

void InnovationRegistry::reserve_node_ids(int upto_exclusive) {
    next_node_id_ = std::max(next_node_id_, upto_exclusive);
}

void InnovationRegistry::restore(int next_node_id, int next_innovation,
                                 std::map<std::pair<int, int>, int> edges,
                                 std::map<int, std::vector<SplitRecord>> splits) {
    next_node_id_ = next_node_id;
    next_innovation_ = next_innovation;
    edge_innov_ = std::move(edges);
    splits_ = std::move(splits);
}

namespace {

void insert_node_sorted(Genome& g, NodeGene node) {
    auto it = std::lower_bound(g.nodes.begin(), g.nodes.end(), node.id,
                               [](const NodeGene& n, int v) { return n.id < v; });
    g.nodes.insert(it, node);
}

void insert_connection_sorted(Genome& g, ConnectionGene conn) {
    auto it = std::lower_bound(
        g.connections.begin(), g.connections.end(), conn.innovation,
        [](const ConnectionGene& c, int v) { return c.innovation < v; });
    g.connections.insert(it, conn);
}

RuleKind draw_rule_kind(Neurotransmitter nt, const MutationConfig& cfg, Rng& rng) {
    const bool prefer_hebbian = nt == Neurotransmitter::excitatory;
    const bool hebbian = rng.chance(cfg.preferred_family_prob) ? prefer_hebbian : !prefer_hebbian;
    const bool symmetric = rng.chance(0.5);
    return make_rule_kind(symmetric, hebbian);
}

NodeGene draw_node(int id, NodeKind kind, Neurotransmitter nt, const MutationConfig& cfg,
                   Rng& rng) {
    NodeGene n;
    n.id = id;
    n.kind = kind;
    n.nt = nt;
    n.bias = rng.chance(cfg.bias_prob);
    n.rule = sample_rule(draw_rule_kind(nt, cfg, rng), rng);
    return n;
}

void perturb_params(LearningRule& rule, Rng& rng) {
    const RuleRanges& r = ranges_for(rule.kind);
    const auto bump = [&](double& p, const ParamRange& range) {
        p = range.clamp(p + rng.normal(0.0, std::sqrt(mutation_variance(range))));
    };
    bump(rule.a_plus, r.a_plus);
    bump(rule.a_minus, r.a_minus);
    bump(rule.shape_plus, r.shape_plus);
    bump(rule.shape_minus, r.shape_minus);
}

} // namespace

Genome init_genome(int n_inputs, int n_outputs, InnovationRegistry& registry, Rng& rng,
                   const MutationConfig& config) {
    if (n_inputs < 1 || n_outputs < 1)
        throw std::invalid_argument("init_genome needs at least one input and one output");
    registry.reserve_node_ids(n_inputs + n_outputs);

    Genome g;
    g.nodes.reserve(n_inputs + n_outputs);
    for (int i = 0; i < n_inputs; ++i)
        g.nodes.push_back(NodeGene{i, NodeKind::input, Neurotransmitter::excitatory, false, {}});
    for (int o = 0; o < n_outputs; ++o)
        g.nodes.push_back(draw_node(n_inputs + o, NodeKind::output,
                                    Neurotransmitter::excitatory, config, rng));

    for (int i = 0; i < n_inputs; ++i) {
        for (int o = 0; o < n_outputs; ++o) {
            const int to = n_inputs + o;
            ConnectionGene c;
            c.innovation = registry.edge_innovation(i, to);
            c.from = i;
            c.to = to;
            c.enabled = true;
            insert_connection_sorted(g, c);
        }
    }
    return g;
}

Genome mutate(const Genome& parent, InnovationRegistry& registry, Rng& rng,
              const MutationConfig& cfg, MutationStats* stats) {
    Genome g = parent;

    for (NodeGene& n : g.nodes) {
        if (n.kind == NodeKind::input) continue;
        if (stats) ++stats->locus_sites;

        if (n.kind == NodeKind::hidden && rng.chance(cfg.locus_rate)) {
            n.nt = n.nt == Neurotransmitter::excitatory ? Neurotransmitter::inhibitory
                                                        : Neurotransmitter::excitatory;
            if (stats) ++stats->nt_switches;
        }
        if (rng.chance(cfg.locus_rate)) {
            n.bias = !n.bias;
            if (stats) ++stats->bias_flips;
        }
        if (rng.chance(cfg.locus_rate)) {
            // switch to one of the other three kinds; crossing the family
            // boundary moves the parameters to the other domain, so resample
            int offset = 1 + static_cast<int>(rng.uniform_int(kNumRuleKinds - 1));
            RuleKind next = static_cast<RuleKind>(
                (static_cast<int>(n.rule.kind) + offset) % kNumRuleKinds);
            if (is_symmetric(next) != is_symmetric(n.rule.kind)) {
                n.rule = sample_rule(next, rng);
            } else {
                n.rule.kind = next;
            }
            if (stats) ++stats->kind_switches;
        }
        if (rng.chance(cfg.locus_rate)) {
            perturb_params(n.rule, rng);
            if (stats) ++stats->param_perturbs;
        }
        if (rng.chance(cfg.reinit_rate)) {
            n.rule = sample_rule(n.rule.kind, rng);
            if (stats) ++stats->param_reinits;
        }
    }

    if (rng.chance(cfg.add_connection_rate)) {
        // candidate targets are the non-input nodes
        std::vector<int> targets;
        for (const NodeGene& n : g.nodes)
            if (n.kind != NodeKind::input) targets.push_back(n.id);
        for (int attempt = 0; attempt < 32 && !targets.empty(); ++attempt) {
            const int from = g.nodes[rng.index(g.nodes.size())].id;
            const int to = targets[rng.index(targets.size())];
            if (const ConnectionGene* existing = g.find_connection(from, to)) {
                if (!existing->enabled) {
                    for (ConnectionGene& c : g.connections)
                        if (c.from == from && c.to == to) c.enabled = true;
                    if (stats) ++stats->added_connections;
                    break;
                }
                continue;
            }
            ConnectionGene c;
            c.innovation = registry.edge_innovation(from, to);
            c.from = from;
            c.to = to;
            c.enabled = true;
            insert_connection_sorted(g, c);
            if (stats) ++stats->added_connections;
            break;
        }
    }

    if (rng.chance(cfg.add_node_rate)) {
        std::vector<int> enabled_idx;
        for (int i = 0; i < static_cast<int>(g.connections.size()); ++i)
            if (g.connections[i].enabled) enabled_idx.push_back(i);
        if (!enabled_idx.empty()) {
            const int ci = enabled_idx[rng.index(enabled_idx.size())];
            ConnectionGene split = g.connections[ci];
            g.connections[ci].enabled = false;

            const auto record = registry.split_innovation(split.innovation, g);
            const Neurotransmitter nt = rng.chance(cfg.excitatory_prob)
                                            ? Neurotransmitter::excitatory
                                            : Neurotransmitter::inhibitory;
            insert_node_sorted(g, draw_node(record.node_id, NodeKind::hidden, nt, cfg, rng));

            ConnectionGene in_half;
            in_half.innovation = registry.edge_innovation(split.from, record.node_id);
            in_half.from = split.from;
            in_half.to = record.node_id;
            in_half.enabled = true;
            insert_connection_sorted(g, in_half);

            ConnectionGene out_half;
            out_half.innovation = registry.edge_innovation(record.node_id, split.to);
            out_half.from = record.node_id;
            out_half.to = split.to;
            out_half.enabled = true;
            insert_connection_sorted(g, out_half);
            if (stats) ++stats->added_nodes;
        }
    }

    return g;
}

Genome crossover(const Genome& a, const Genome& b, double fitness_a, double fitness_b, Rng& rng) {
    const bool a_fitter = fitness_a >= fitness_b;
    const Genome& fitter = a_fitter ? a : b;

    Genome child;
    std::set<std::pair<int, int>> enabled_pairs;

    std::size_t ia = 0, ib = 0;
    const auto push_conn = [&](const ConnectionGene& c) {
        if (c.enabled) {
            if (!enabled_pairs.insert({c.from, c.to}).second) return;  // cross-lineage duplicate
        }
        child.connections.push_back(c);
    };
    while (ia < a.connections.size() || ib < b.connections.size()) {
        const bool have_a = ia < a.connections.size();
        const bool have_b = ib < b.connections.size();
        if (have_a && have_b && a.connections[ia].innovation == b.connections[ib].innovation) {
            push_conn(rng.chance(0.5) ? a.connections[ia] : b.connections[ib]);
            ++ia;
            ++ib;
        } else if (have_a &&
                   (!have_b || a.connections[ia].innovation < b.connections[ib].innovation)) {
            if (a_fitter) push_conn(a.connections[ia]);
            ++ia;
        } else {
            if (!a_fitter) push_conn(b.connections[ib]);
            ++ib;
        }
    }

    // nodes: the fixed interface plus every endpoint referenced above;
    // matching ids inherit from a random parent, the rest from their owner
    std::set<int> needed;
    for (const NodeGene& n : fitter.nodes)
        if (n.kind != NodeKind::hidden) needed.insert(n.id);
    for (const ConnectionGene& c : child.connections) {
        needed.insert(c.from);
        needed.insert(c.to);
    }
    for (int id : needed) {
        const NodeGene* na = a.find_node(id);
        const NodeGene* nb = b.find_node(id);
        if (na && nb) {
            child.nodes.push_back(rng.chance(0.5) ? *na : *nb);
        } else if (na || nb) {
            child.nodes.push_back(na ? *na : *nb);
        } else {
            throw std::runtime_error("crossover: connection endpoint missing from both parents");
        }
    }
    return child;
}

double compatibility_distance(const Genome& a, const Genome& b,
                              const DistanceCoefficients& coef) {
    const std::size_t ca = a.connections.size();
    const std::size_t cb = b.connections.size();
    double n = static_cast<double>(std::max(ca, cb));
    if (ca < static_cast<std::size_t>(coef.normalize_size_threshold) &&
        cb < static_cast<std::size_t>(coef.normalize_size_threshold))
        n = 1.0;

    int excess = 0, disjoint = 0;
    const int max_a = a.max_innovation();
    const int max_b = b.max_innovation();
    {
        std::size_t ia = 0, ib = 0;
        while (ia < ca || ib < cb) {
            const bool have_a = ia < ca;
            const bool have_b = ib < cb;
            if (have_a && have_b &&
                a.connections[ia].innovation == b.connections[ib].innovation) {
                ++ia;
                ++ib;
            } else if (have_a &&
                       (!have_b || a.connections[ia].innovation < b.connections[ib].innovation)) {
                (a.connections[ia].innovation > max_b) ? ++excess : ++disjoint;
                ++ia;
            } else {
                (b.connections[ib].innovation > max_a) ? ++excess : ++disjoint;
                ++ib;
            }
        }
    }

    // mean per-matching-node locus disagreement
    double locus_sum = 0.0;
    int matching_nodes = 0;
    {
        std::size_t ia = 0, ib = 0;
        while (ia < a.nodes.size() && ib < b.nodes.size()) {
            const NodeGene& na = a.nodes[ia];
            const NodeGene& nb = b.nodes[ib];
            if (na.id < nb.id) {
                ++ia;
            } else if (nb.id < na.id) {
                ++ib;
            } else {
                ++matching_nodes;
                if (na.kind != NodeKind::input) {
                    double d = 0.0;
                    if (na.rule.kind != nb.rule.kind) d += 1.0;
                    if (na.nt != nb.nt) d += 1.0;
                    if (na.bias != nb.bias) d += 1.0;
                    if (na.rule.kind == nb.rule.kind) {
                        const RuleRanges& r = ranges_for(na.rule.kind);
                        const double pd =
                            (std::fabs(na.rule.a_plus - nb.rule.a_plus) / r.a_plus.width() +
                             std::fabs(na.rule.a_minus - nb.rule.a_minus) / r.a_minus.width() +
                             std::fabs(na.rule.shape_plus - nb.rule.shape_plus) /
                                 r.shape_plus.width() +
                             std::fabs(na.rule.shape_minus - nb.rule.shape_minus) /
                                 r.shape_minus.width()) /
                            4.0;
                        d += pd;
                    }
                    locus_sum += d;
                }
                ++ia;
                ++ib;
            }
        }
    }
    const double mean_locus = matching_nodes > 0 ? locus_sum / matching_nodes : 0.0;

    return coef.c1 * excess / n + coef.c2 * disjoint / n + coef.c3 * mean_locus;
}

double initial_synapse_weight(Rng& rng) {
    return std::max(0.0, rng.normal(1.0, 0.2));
}

Network develop(const Genome& g, Rng& rng, const SimParams& params) {
    // unified indexing: inputs in id order, then the remaining nodes in id order
    std::vector<int> input_ids, neuron_ids;
    for (const NodeGene& n : g.nodes)
        (n.kind == NodeKind::input ? input_ids : neuron_ids).push_back(n.id);
    if (input_ids.empty()) throw std::runtime_error("develop: genome has no input nodes");

    std::vector<int> node_index(g.nodes.empty() ? 0 : g.nodes.back().id + 1, -1);
    std::vector<int> node_ids;
    int next = 0;
    for (int id : input_ids) {
        node_index[id] = next++;
        node_ids.push_back(id);
    }
    std::vector<NeuronState> neurons;
    std::vector<int> outputs;
    for (int id : neuron_ids) {
        const NodeGene* n = g.find_node(id);
        NeuronState s;
        s.nt = n->nt;
        s.bias_enabled = n->bias;
        s.rule = n->rule;
        if (n->kind == NodeKind::output) outputs.push_back(static_cast<int>(neurons.size()));
        neurons.push_back(s);
        node_index[id] = next++;
        node_ids.push_back(id);
    }
    if (outputs.empty()) throw std::runtime_error("develop: genome has no output nodes");

    const int n_in = static_cast<int>(input_ids.size());
    std::vector<SynapseInit> synapses;
    std::set<std::pair<int, int>> seen;
    for (const ConnectionGene& c : g.connections) {
        if (!c.enabled) continue;
        if (c.from < 0 || c.from >= static_cast<int>(node_index.size()) ||
            node_index[c.from] < 0)
            throw std::runtime_error("develop: connection from unknown node " +
                                     std::to_string(c.from));
        if (c.to < 0 || c.to >= static_cast<int>(node_index.size()) || node_index[c.to] < 0)
            throw std::runtime_error("develop: connection to unknown node " +
                                     std::to_string(c.to));
        if (node_index[c.to] < n_in)
            throw std::runtime_error("develop: connection into an input node");
        if (!seen.insert({c.from, c.to}).second) continue;
        SynapseInit s;
        s.pre = node_index[c.from];
        s.post = node_index[c.to] - n_in;
        // raw draw: initial weights straddle the firing threshold so single
        // presynaptic spikes can drive a neuron; STDP pulls them into
        // [w_min, w_max] once events flow
        s.weight = initial_synapse_weight(rng);
        synapses.push_back(s);
    }

    return Network(n_in, std::move(neurons), std::move(outputs), synapses, params,
                   std::move(node_ids));
}

} // namespace snnevo
