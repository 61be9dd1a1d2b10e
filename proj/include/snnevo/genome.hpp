#ifndef SNNEVO_GENOME_HPP
#define SNNEVO_GENOME_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "snnevo/plasticity.hpp"
#include "snnevo/rng.hpp"
#include "snnevo/sim.hpp"

namespace snnevo {

enum class NodeKind : std::uint8_t { input = 0, hidden = 1, output = 2 };

/// Node gene. Hidden and output nodes carry the three extra loci (learning
/// rule + parameters, bias, and for hidden nodes the neurotransmitter type);
/// input nodes are plain spike generators.
struct NodeGene {
    int id = 0;
    NodeKind kind = NodeKind::input;
    Neurotransmitter nt = Neurotransmitter::excitatory;
    bool bias = false;
    LearningRule rule;

    bool operator==(const NodeGene&) const = default;
};

/// Connection gene. Weightless: the phenotype draws its weights at
/// development time.
struct ConnectionGene {
    int innovation = 0;
    int from = 0;
    int to = 0;
    bool enabled = true;

    bool operator==(const ConnectionGene&) const = default;
};

/// Genotype: node genes sorted by id, connection genes sorted by innovation.
struct Genome {
    std::vector<NodeGene> nodes;
    std::vector<ConnectionGene> connections;

    const NodeGene* find_node(int id) const;
    bool has_node(int id) const { return find_node(id) != nullptr; }
    const ConnectionGene* find_connection(int from, int to) const;
    int max_innovation() const;
    int count_enabled() const;

    bool operator==(const Genome&) const = default;
};

/// Historical-marking bookkeeping. One innovation number per directed node
/// pair, and split records so that repeating a structural mutation yields
/// the same markers.
class InnovationRegistry {
public:
    struct SplitRecord {
        int node_id = 0;
    };

    int edge_innovation(int from, int to);
    SplitRecord split_innovation(int connection_innovation, const Genome& genome);
    void reserve_node_ids(int upto_exclusive);

    int next_node_id() const { return next_node_id_; }
    int next_innovation() const { return next_innovation_; }

    // serialization access
    const std::map<std::pair<int, int>, int>& edges() const { return edge_innov_; }
    const std::map<int, std::vector<SplitRecord>>& splits() const { return splits_; }
    void restore(int next_node_id, int next_innovation,
                 std::map<std::pair<int, int>, int> edges,
                 std::map<int, std::vector<SplitRecord>> splits);

private:
    int next_node_id_ = 0;
    int next_innovation_ = 0;
    std::map<std::pair<int, int>, int> edge_innov_;
    std::map<int, std::vector<SplitRecord>> splits_;
};

struct MutationConfig {
    double locus_rate = 0.10;         // per-locus switch/perturb chance
    double reinit_rate = 0.02;        // full re-initialization of rule params
    double add_connection_rate = 0.05;
    double add_node_rate = 0.03;
    double excitatory_prob = 0.70;    // new hidden node neurotransmitter draw
    double bias_prob = 0.20;
    double preferred_family_prob = 0.70;  // Hebbian if excitatory, anti if inhibitory
};

/// Counters for the stochastic mutation events, for calibration checks.
struct MutationStats {
    int nt_switches = 0;
    int bias_flips = 0;
    int kind_switches = 0;
    int param_perturbs = 0;
    int param_reinits = 0;
    int added_connections = 0;
    int added_nodes = 0;
    int locus_sites = 0;  // number of (node, locus-bundle) mutation opportunities
};

/// Minimal seed genome: inputs fully connected to outputs, no hidden nodes.
Genome init_genome(int n_inputs, int n_outputs, InnovationRegistry& registry, Rng& rng,
                   const MutationConfig& config = {});

Genome mutate(const Genome& g, InnovationRegistry& registry, Rng& rng,
              const MutationConfig& config, MutationStats* stats = nullptr);

Genome crossover(const Genome& a, const Genome& b, double fitness_a, double fitness_b, Rng& rng);

struct DistanceCoefficients {
    double c1 = 1.0;  // excess
    double c2 = 1.0;  // disjoint
    double c3 = 0.4;  // node-locus distance
    int normalize_size_threshold = 20;
};

double compatibility_distance(const Genome& a, const Genome& b,
                              const DistanceCoefficients& coefficients = {});

/// Raw initial weight draw: Normal(1, 0.2) truncated at zero.
double initial_synapse_weight(Rng& rng);

/// Grow the phenotype: one synapse per enabled connection with a freshly
/// drawn weight, neuron state at rest. Throws std::runtime_error on a
/// malformed genome.
Network develop(const Genome& g, Rng& rng, const SimParams& params);

} // namespace snnevo

#endif
