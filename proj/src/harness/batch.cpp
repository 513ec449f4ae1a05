#include "swarm/harness/batch.hpp"

#include <atomic>
#include <thread>

#include "swarm/error.hpp"

namespace swarm::harness {

namespace {

TrialRecord failure_record(const TrialConfig& config, const std::string& what) {
  TrialRecord r;
  r.experiment_name = std::string(tasks::to_string(config.kind));
  r.participant_id = config.participant_id;
  r.agent = config.controller_id;
  r.seed = config.seed;
  r.completed = false;
  std::string clean = what;
  for (char& c : clean) {
    if (c == ';' || c == '\n' || c == '\r') c = ' ';
  }
  r.mode_detail = "failure=" + clean;
  return r;
}

TrialRecord run_one(const TrialConfig& config) {
  try {
    if (config.max_steps <= 0) throw ConfigError("max_steps must be positive");
    return run_trial(config);
  } catch (const std::exception& e) {
    return failure_record(config, e.what());
  }
}

}  // namespace

std::vector<TrialRecord> run_batch(const std::vector<TrialConfig>& configs, int parallelism) {
  if (parallelism < 1) throw ConfigError("parallelism must be at least 1");
  std::vector<TrialRecord> out(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) out[i] = run_one(configs[i]);
  };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(parallelism), configs.size());
  if (workers <= 1) {
    worker();
    return out;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  pool.clear();
  return out;
}

std::vector<TrialConfig> configs_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("trials") || !j["trials"].is_array()) {
    throw ConfigError("batch: expected an object with a \"trials\" array");
  }
  std::vector<TrialConfig> out;
  std::size_t index = 0;
  for (const auto& t : j["trials"]) {
    const std::string where = "trials[" + std::to_string(index++) + "]";
    try {
      if (!t.is_object()) throw ConfigError("not an object");
      TrialConfig base;
      base.kind = tasks::task_kind_from_string(t.at("task").get<std::string>());
      base.controller_id = t.value("controller", base.controller_id);
      base.max_steps = t.value("max_steps", base.max_steps);
      base.participant_id = t.value("participant", base.participant_id);
      if (base.max_steps <= 0) throw ConfigError("max_steps must be positive");

      std::vector<std::optional<tasks::TaskMode>> modes;
      auto add_mode = [&](const std::string& label) {
        if (label == "random") modes.emplace_back();
        else modes.emplace_back(tasks::parse_mode(base.kind, label));
      };
      if (t.contains("modes")) {
        for (const auto& m : t["modes"]) add_mode(m.get<std::string>());
      } else {
        add_mode(t.value("mode", std::string("random")));
      }

      std::vector<std::uint64_t> seeds;
      if (t.contains("seeds")) {
        const auto& s = t["seeds"];
        if (!s.is_array() || s.size() != 2) throw ConfigError("seeds must be [first, count]");
        const auto first = s[0].get<std::uint64_t>();
        const auto count = s[1].get<std::uint64_t>();
        for (std::uint64_t k = 0; k < count; ++k) seeds.push_back(first + k);
      } else {
        seeds.push_back(t.value("seed", std::uint64_t{0}));
      }

      for (const auto& mode : modes) {
        for (auto seed : seeds) {
          TrialConfig c = base;
          c.mode = mode;
          c.seed = seed;
          out.push_back(std::move(c));
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("batch " + where + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError("batch " + where + ": " + e.what());
    }
  }
  return out;
}

std::vector<TrialConfig> configs_from_text(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("batch: ") + e.what());
  }
  return configs_from_json(j);
}

}  // namespace swarm::harness
