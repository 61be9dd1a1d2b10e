#include "snnevo/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace snnevo {

namespace {

const char* node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::input: return "input";
        case NodeKind::hidden: return "hidden";
        case NodeKind::output: return "output";
    }
    return "?";
}

NodeKind node_kind_from_name(const std::string& s) {
    if (s == "input") return NodeKind::input;
    if (s == "hidden") return NodeKind::hidden;
    if (s == "output") return NodeKind::output;
    throw std::invalid_argument("unknown node kind: " + s);
}

} // namespace

Json genome_to_json(const Genome& g) {
    Json j;
    j["format_version"] = kGenomeFormatVersion;
    Json nodes = Json::array();
    for (const NodeGene& n : g.nodes) {
        Json jn;
        jn["id"] = n.id;
        jn["kind"] = node_kind_name(n.kind);
        if (n.kind != NodeKind::input) {
            jn["neurotransmitter"] =
                n.nt == Neurotransmitter::excitatory ? "excitatory" : "inhibitory";
            jn["bias"] = n.bias;
            Json jr;
            jr["kind"] = rule_kind_name(n.rule.kind);
            jr["a_plus"] = n.rule.a_plus;
            jr["a_minus"] = n.rule.a_minus;
            jr["shape_plus"] = n.rule.shape_plus;
            jr["shape_minus"] = n.rule.shape_minus;
            jn["rule"] = jr;
        }
        nodes.push_back(jn);
    }
    j["nodes"] = nodes;
    Json conns = Json::array();
    for (const ConnectionGene& c : g.connections) {
        Json jc;
        jc["innovation"] = c.innovation;
        jc["from"] = c.from;
        jc["to"] = c.to;
        jc["enabled"] = c.enabled;
        conns.push_back(jc);
    }
    j["connections"] = conns;
    return j;
}

Genome genome_from_json(const Json& j) {
    if (j.at("format_version").get<int>() != kGenomeFormatVersion)
        throw std::runtime_error("unsupported genome format version");
    Genome g;
    for (const Json& jn : j.at("nodes")) {
        NodeGene n;
        n.id = jn.at("id").get<int>();
        n.kind = node_kind_from_name(jn.at("kind").get<std::string>());
        if (n.kind != NodeKind::input) {
            n.nt = jn.at("neurotransmitter").get<std::string>() == "inhibitory"
                       ? Neurotransmitter::inhibitory
                       : Neurotransmitter::excitatory;
            n.bias = jn.at("bias").get<bool>();
            const Json& jr = jn.at("rule");
            n.rule.kind = rule_kind_from_name(jr.at("kind").get<std::string>());
            n.rule.a_plus = jr.at("a_plus").get<double>();
            n.rule.a_minus = jr.at("a_minus").get<double>();
            n.rule.shape_plus = jr.at("shape_plus").get<double>();
            n.rule.shape_minus = jr.at("shape_minus").get<double>();
        }
        g.nodes.push_back(n);
    }
    for (const Json& jc : j.at("connections")) {
        ConnectionGene c;
        c.innovation = jc.at("innovation").get<int>();
        c.from = jc.at("from").get<int>();
        c.to = jc.at("to").get<int>();
        c.enabled = jc.at("enabled").get<bool>();
        g.connections.push_back(c);
    }
    return g;
}

std::string serialize_genome(const Genome& g) { return genome_to_json(g).dump(2) + "\n"; }

Genome deserialize_genome(const std::string& text) {
    return genome_from_json(Json::parse(text));
}

Json champion_to_json(const ChampionRecord& c) {
    Json j;
    j["format_version"] = kChampionFormatVersion;
    j["task"] = c.task;
    j["generation"] = c.generation;
    j["fitness"] = c.fitness;
    j["accuracy"] = c.accuracy;
    j["eos_accuracy"] = c.eos_accuracy;
    j["genome"] = genome_to_json(c.genome);
    return j;
}

ChampionRecord champion_from_json(const Json& j) {
    if (j.at("format_version").get<int>() != kChampionFormatVersion)
        throw std::runtime_error("unsupported champion format version");
    ChampionRecord c;
    c.task = j.at("task").get<std::string>();
    c.generation = j.at("generation").get<int>();
    c.fitness = j.at("fitness").get<double>();
    c.accuracy = j.at("accuracy").get<double>();
    c.eos_accuracy = j.at("eos_accuracy").get<double>();
    c.genome = genome_from_json(j.at("genome"));
    return c;
}

void save_champion(const ChampionRecord& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write champion file: " + path);
    out << champion_to_json(c).dump(2) << "\n";
}

ChampionRecord load_champion(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read champion file: " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::runtime_error("champion file parse error at byte " + std::to_string(e.byte) +
                                 ": " + path);
    }
    return champion_from_json(j);
}

Json registry_to_json(const InnovationRegistry& reg) {
    Json j;
    j["next_node_id"] = reg.next_node_id();
    j["next_innovation"] = reg.next_innovation();
    Json edges = Json::array();
    for (const auto& [key, innov] : reg.edges())
        edges.push_back(Json::array({key.first, key.second, innov}));
    j["edges"] = edges;
    Json splits = Json::array();
    for (const auto& [conn, records] : reg.splits()) {
        Json ids = Json::array();
        for (const auto& r : records) ids.push_back(r.node_id);
        splits.push_back(Json::array({conn, ids}));
    }
    j["splits"] = splits;
    return j;
}

void registry_from_json(const Json& j, InnovationRegistry& reg) {
    std::map<std::pair<int, int>, int> edges;
    for (const Json& e : j.at("edges"))
        edges[{e[0].get<int>(), e[1].get<int>()}] = e[2].get<int>();
    std::map<int, std::vector<InnovationRegistry::SplitRecord>> splits;
    for (const Json& s : j.at("splits")) {
        std::vector<InnovationRegistry::SplitRecord> records;
        for (const Json& id : s[1]) records.push_back({id.get<int>()});
        splits[s[0].get<int>()] = std::move(records);
    }
    reg.restore(j.at("next_node_id").get<int>(), j.at("next_innovation").get<int>(),
                std::move(edges), std::move(splits));
}

} // namespace snnevo
