#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "snnevo/genome.hpp"

using namespace snnevo;

TEST_CASE("initial genome is fully connected input to output") {
    InnovationRegistry reg;
    Rng rng(1);
    const Genome g = init_genome(4, 2, reg, rng);
    CHECK(g.nodes.size() == 6);
    CHECK(g.connections.size() == 8);
    for (const ConnectionGene& c : g.connections) CHECK(c.enabled);
    for (int i = 0; i < 4; ++i) CHECK(g.nodes[i].kind == NodeKind::input);
    for (int o = 4; o < 6; ++o) {
        CHECK(g.nodes[o].kind == NodeKind::output);
        CHECK(g.nodes[o].nt == Neurotransmitter::excitatory);
    }
}

TEST_CASE("initial loci frequencies: 20% bias, 70% hebbian family") {
    InnovationRegistry reg;
    Rng rng(77);
    int bias = 0, hebbian = 0, outputs = 0;
    for (int i = 0; i < 5000; ++i) {
        const Genome g = init_genome(2, 2, reg, rng);
        for (const NodeGene& n : g.nodes) {
            if (n.kind != NodeKind::output) continue;
            ++outputs;
            bias += n.bias;
            hebbian += is_hebbian(n.rule.kind);
        }
    }
    CHECK(static_cast<double>(bias) / outputs == doctest::Approx(0.20).epsilon(0.10));
    CHECK(static_cast<double>(hebbian) / outputs == doctest::Approx(0.70).epsilon(0.05));
}

TEST_CASE("init is deterministic per seed") {
    InnovationRegistry ra, rb;
    Rng a(9), b(9);
    CHECK(init_genome(4, 2, ra, a) == init_genome(4, 2, rb, b));
}

TEST_CASE("mutation perturbations stay inside the parameter ranges") {
    InnovationRegistry reg;
    Rng rng(3);
    Genome g = init_genome(3, 2, reg, rng);
    MutationConfig cfg;
    for (int i = 0; i < 2000; ++i) {
        g = mutate(g, reg, rng, cfg);
        for (const NodeGene& n : g.nodes) {
            if (n.kind == NodeKind::input) continue;
            const RuleRanges& r = ranges_for(n.rule.kind);
            CHECK(n.rule.a_plus >= r.a_plus.lo);
            CHECK(n.rule.a_plus <= r.a_plus.hi);
            CHECK(n.rule.a_minus >= r.a_minus.lo);
            CHECK(n.rule.a_minus <= r.a_minus.hi);
            CHECK(n.rule.shape_plus >= r.shape_plus.lo);
            CHECK(n.rule.shape_plus <= r.shape_plus.hi);
            CHECK(n.rule.shape_minus >= r.shape_minus.lo);
            CHECK(n.rule.shape_minus <= r.shape_minus.hi);
        }
    }
}

TEST_CASE("locus mutation frequencies land on the configured rates") {
    InnovationRegistry reg;
    Rng rng(15);
    // one hidden node so the neurotransmitter locus is mutable
    MutationConfig grow;
    grow.add_node_rate = 1.0;
    grow.add_connection_rate = 0.0;
    Genome base = init_genome(1, 1, reg, rng);
    base = mutate(base, reg, rng, grow);

    MutationConfig cfg;  // defaults: 10% locus, 2% reinit
    cfg.add_connection_rate = 0.0;
    cfg.add_node_rate = 0.0;
    MutationStats stats;
    const int trials = 20000;
    int nt_flips_observed = 0;
    for (int i = 0; i < trials; ++i) {
        const Genome m = mutate(base, reg, rng, cfg, &stats);
        for (std::size_t k = 0; k < m.nodes.size(); ++k)
            if (m.nodes[k].kind == NodeKind::hidden && m.nodes[k].nt != base.nodes[k].nt)
                ++nt_flips_observed;
    }
    // two mutable nodes (hidden + output) per call
    CHECK(stats.locus_sites == 2 * trials);
    const double sites = static_cast<double>(stats.locus_sites);
    CHECK(stats.bias_flips / sites == doctest::Approx(0.10).epsilon(0.08));
    CHECK(stats.kind_switches / sites == doctest::Approx(0.10).epsilon(0.08));
    CHECK(stats.param_perturbs / sites == doctest::Approx(0.10).epsilon(0.08));
    CHECK(stats.param_reinits / sites == doctest::Approx(0.02).epsilon(0.15));
    // the hidden node's observable flips match its counter
    CHECK(static_cast<double>(nt_flips_observed) / trials == doctest::Approx(0.10).epsilon(0.10));
}

TEST_CASE("new hidden nodes draw 70% excitatory and family by neurotransmitter") {
    InnovationRegistry reg;
    Rng rng(21);
    MutationConfig cfg;
    cfg.add_node_rate = 1.0;
    cfg.add_connection_rate = 0.0;
    cfg.locus_rate = 0.0;
    cfg.reinit_rate = 0.0;
    int excitatory = 0, preferred = 0, total = 0;
    for (int i = 0; i < 5000; ++i) {
        Genome g = init_genome(2, 1, reg, rng);
        Genome m = mutate(g, reg, rng, cfg);
        for (const NodeGene& n : m.nodes) {
            if (n.kind != NodeKind::hidden) continue;
            ++total;
            const bool exc = n.nt == Neurotransmitter::excitatory;
            excitatory += exc;
            preferred += exc == is_hebbian(n.rule.kind);
        }
    }
    REQUIRE(total > 0);
    CHECK(static_cast<double>(excitatory) / total == doctest::Approx(0.70).epsilon(0.05));
    CHECK(static_cast<double>(preferred) / total == doctest::Approx(0.70).epsilon(0.05));
}

TEST_CASE("mutate never duplicates an enabled edge and keeps endpoints present") {
    InnovationRegistry reg;
    Rng rng(31);
    MutationConfig cfg;
    cfg.add_connection_rate = 0.5;
    cfg.add_node_rate = 0.3;
    Genome g = init_genome(3, 2, reg, rng);
    for (int i = 0; i < 300; ++i) {
        g = mutate(g, reg, rng, cfg);
        std::set<std::pair<int, int>> seen;
        for (const ConnectionGene& c : g.connections) {
            CHECK(g.has_node(c.from));
            CHECK(g.has_node(c.to));
            CHECK(g.find_node(c.to)->kind != NodeKind::input);
            if (c.enabled) CHECK(seen.insert({c.from, c.to}).second);
        }
        // genes stay sorted by innovation, nodes by id
        for (std::size_t k = 1; k < g.connections.size(); ++k)
            CHECK(g.connections[k - 1].innovation < g.connections[k].innovation);
        for (std::size_t k = 1; k < g.nodes.size(); ++k)
            CHECK(g.nodes[k - 1].id < g.nodes[k].id);
    }
    CHECK(g.nodes.size() > 5);  // structure actually grew under these rates
}

TEST_CASE("the same split in one generation reuses the same markers") {
    InnovationRegistry reg;
    Rng rng(41);
    MutationConfig cfg;
    cfg.add_node_rate = 1.0;
    cfg.add_connection_rate = 0.0;
    cfg.locus_rate = 0.0;
    cfg.reinit_rate = 0.0;
    Genome g = init_genome(1, 1, reg, rng);  // single connection to split
    Genome m1 = mutate(g, reg, rng, cfg);
    Genome m2 = mutate(g, reg, rng, cfg);
    REQUIRE(m1.nodes.size() == 3);
    REQUIRE(m2.nodes.size() == 3);
    CHECK(m1.nodes[1].id == m2.nodes[1].id);
    CHECK(m1.connections.size() == m2.connections.size());
    for (std::size_t i = 0; i < m1.connections.size(); ++i) {
        CHECK(m1.connections[i].innovation == m2.connections[i].innovation);
        CHECK(m1.connections[i].from == m2.connections[i].from);
        CHECK(m1.connections[i].to == m2.connections[i].to);
    }
}

TEST_CASE("crossover of identical parents reproduces the structure") {
    InnovationRegistry reg;
    Rng rng(51);
    Genome g = init_genome(4, 2, reg, rng);
    MutationConfig cfg;
    cfg.add_node_rate = 1.0;
    g = mutate(g, reg, rng, cfg);
    const Genome child = crossover(g, g, 0.5, 0.5, rng);
    CHECK(child == g);
}

TEST_CASE("disjoint and excess genes come from the fitter parent") {
    InnovationRegistry reg;
    Rng rng(61);
    Genome a = init_genome(2, 1, reg, rng);
    Genome b = a;
    // grow a beyond b
    MutationConfig cfg;
    cfg.add_node_rate = 1.0;
    cfg.add_connection_rate = 0.0;
    a = mutate(a, reg, rng, cfg);
    REQUIRE(a.connections.size() > b.connections.size());

    const Genome child = crossover(a, b, 1.0, 0.0, rng);
    std::set<int> child_innovations;
    for (const ConnectionGene& c : child.connections) child_innovations.insert(c.innovation);
    for (const ConnectionGene& c : a.connections)
        CHECK(child_innovations.count(c.innovation) == 1);

    // with b fitter, the excess from a is dropped
    const Genome child_b = crossover(a, b, 0.0, 1.0, rng);
    CHECK(child_b.connections.size() == b.connections.size());
}

TEST_CASE("crossover children never reference a missing node") {
    InnovationRegistry reg;
    Rng rng(71);
    MutationConfig cfg;
    cfg.add_node_rate = 0.3;
    cfg.add_connection_rate = 0.3;
    Genome a = init_genome(3, 2, reg, rng);
    Genome b = init_genome(3, 2, reg, rng);
    for (int i = 0; i < 100; ++i) {
        a = mutate(a, reg, rng, cfg);
        b = mutate(b, reg, rng, cfg);
        const Genome child = crossover(a, b, rng.uniform01(), rng.uniform01(), rng);
        for (const ConnectionGene& c : child.connections) {
            CHECK(child.has_node(c.from));
            CHECK(child.has_node(c.to));
        }
    }
}

TEST_CASE("compatibility distance basics") {
    InnovationRegistry reg;
    Rng rng(81);
    Genome a = init_genome(4, 2, reg, rng);
    CHECK(compatibility_distance(a, a) == 0.0);

    Genome b = a;
    // flip one output rule kind
    b.nodes[4].rule.kind = b.nodes[4].rule.kind == RuleKind::asymmetric_hebbian
                               ? RuleKind::symmetric_hebbian
                               : RuleKind::asymmetric_hebbian;
    const DistanceCoefficients coef;
    const double d_ab = compatibility_distance(a, b, coef);
    const double d_ba = compatibility_distance(b, a, coef);
    CHECK(d_ab == doctest::Approx(d_ba).epsilon(1e-15));
    // one kind mismatch over six matching nodes, scaled by c3
    CHECK(d_ab == doctest::Approx(coef.c3 * 1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("initial weight draw matches Normal(1, 0.2) truncated at zero") {
    Rng rng(91);
    const int n = 10000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        const double w = initial_synapse_weight(rng);
        CHECK(w >= 0.0);
        sum += w;
        sq += w * w;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    CHECK(mean == doctest::Approx(1.0).epsilon(0.02));
    CHECK(sd == doctest::Approx(0.2).epsilon(0.10));
}

TEST_CASE("develop draws the phenotype and respects the weight budget") {
    InnovationRegistry reg;
    Rng rng(101);
    // 6 inputs all wired to one output: raw weights sum to ~6, the budget is 5
    Genome g = init_genome(6, 1, reg, rng);
    SimParams params;
    Rng dev(7);
    Network net = develop(g, dev, params);
    CHECK(net.num_inputs() == 6);
    CHECK(net.num_outputs() == 1);
    CHECK(net.num_synapses() == 6);
    CHECK(net.incoming_weight_sum(0) <= params.weight_budget + 1e-12);
}

TEST_CASE("develop is deterministic and disabled genes grow no synapse") {
    InnovationRegistry reg;
    Rng rng(111);
    Genome g = init_genome(4, 2, reg, rng);
    g.connections[2].enabled = false;
    SimParams params;

    Rng d1(5), d2(5), d3(6);
    Network n1 = develop(g, d1, params);
    Network n2 = develop(g, d2, params);
    Network n3 = develop(g, d3, params);
    CHECK(n1.num_synapses() == 7);
    CHECK(n2.num_synapses() == 7);
    REQUIRE(n1.num_synapses() == n3.num_synapses());
    bool same_weights = true;
    bool all_equal_across_seeds = true;
    for (int k = 0; k < n1.num_synapses(); ++k) {
        if (n1.weight(k) != n2.weight(k)) same_weights = false;
        if (n1.weight(k) != n3.weight(k)) all_equal_across_seeds = false;
        CHECK(n1.synapse_pre()[k] == n3.synapse_pre()[k]);
        CHECK(n1.synapse_post()[k] == n3.synapse_post()[k]);
    }
    CHECK(same_weights);
    CHECK_FALSE(all_equal_across_seeds);  // seeds differ in weights only
}

TEST_CASE("develop rejects malformed genomes") {
    InnovationRegistry reg;
    Rng rng(121);
    Genome g = init_genome(2, 1, reg, rng);
    Genome broken = g;
    broken.connections[0].to = 99;
    SimParams params;
    Rng dev(1);
    CHECK_THROWS_AS(develop(broken, dev, params), std::runtime_error);
}
