#pragma once

#include <string_view>
#include <vector>

#include <json.hpp>

#include "swarm/harness/record.hpp"
#include "swarm/harness/trial.hpp"

namespace swarm::harness {

// Runs every config on a pool of `parallelism` workers. Output order matches
// input order. A trial that throws yields a failure record instead of
// stopping the batch.
std::vector<TrialRecord> run_batch(const std::vector<TrialConfig>& configs, int parallelism);

// Batch file, JSON:
//   {"trials": [
//     {"task": "VaryNoise", "modes": ["noise=0", "noise=2"], "seeds": [0, 50],
//      "controller": "push", "max_steps": 4000, "participant": "headless"},
//     {"task": "PositionControl", "mode": "n=3", "seed": 7, "controller": "position"}
//   ]}
// "seeds": [first, count] expands to count consecutive seeds. "mode" may be
// "random" or omitted. Every (mode, seed) pair becomes one config.
std::vector<TrialConfig> configs_from_json(const nlohmann::json& j);
std::vector<TrialConfig> configs_from_text(std::string_view text);

}  // namespace swarm::harness
