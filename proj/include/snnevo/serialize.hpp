#ifndef SNNEVO_SERIALIZE_HPP
#define SNNEVO_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "snnevo/env.hpp"
#include "snnevo/genome.hpp"

namespace snnevo {

using Json = nlohmann::ordered_json;

inline constexpr int kGenomeFormatVersion = 1;
inline constexpr int kChampionFormatVersion = 1;

Json genome_to_json(const Genome& g);
Genome genome_from_json(const Json& j);

/// Stable text form (versioned, fixed field order). Round-trips byte-exactly.
std::string serialize_genome(const Genome& g);
Genome deserialize_genome(const std::string& text);

/// Persisted champion: genome plus where and how it was found.
struct ChampionRecord {
    std::string task;
    int generation = -1;
    double fitness = 0.0;
    double accuracy = 0.0;
    double eos_accuracy = 0.0;
    Genome genome;
};

Json champion_to_json(const ChampionRecord& c);
ChampionRecord champion_from_json(const Json& j);
void save_champion(const ChampionRecord& c, const std::string& path);
ChampionRecord load_champion(const std::string& path);

Json registry_to_json(const InnovationRegistry& reg);
void registry_from_json(const Json& j, InnovationRegistry& reg);

} // namespace snnevo

#endif
