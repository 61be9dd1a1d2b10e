#ifndef SNNEVO_CONFIG_HPP
#define SNNEVO_CONFIG_HPP

#include <string>

#include "snnevo/cartpole.hpp"
#include "snnevo/env.hpp"
#include "snnevo/evolve.hpp"
#include "snnevo/serialize.hpp"
#include "snnevo/sim.hpp"

namespace snnevo {

enum class TaskId : std::uint8_t { food_foraging, logic_gate, cart_pole };

const char* task_name(TaskId t);
TaskId task_from_name(const std::string& name);
bool task_is_binary(TaskId t);

/// Everything one run needs. Profiles fill the defaults; a config file can
/// override any field.
struct RunConfig {
    TaskId task = TaskId::food_foraging;
    std::string profile = "paper";
    EvolutionConfig evolution;
    SimParams sim;
    BinaryEnvConfig env;        // binary tasks
    CartPoleConfig cartpole;    // cart-pole task
    int test_simulations = 10;
    int checkpoint_every = 50;
};

/// Built-in profiles. "paper" uses the full-scale experiment settings,
/// "desk" a reduced scale that finishes in minutes.
RunConfig default_config(TaskId task, const std::string& profile);

Json config_to_json(const RunConfig& c);
/// Applies overrides from j onto c. Throws std::invalid_argument naming the
/// offending key path on unknown keys or bad values.
void config_apply_json(RunConfig& c, const Json& j, const std::string& path = "");

RunConfig load_config_file(const std::string& file, TaskId task, const std::string& profile);
void validate_config(const RunConfig& c);

} // namespace snnevo

#endif
