#include "swarm/error.hpp"
#include "swarm/harness/controller.hpp"

namespace swarm::harness {

std::unique_ptr<Controller> make_controller(const std::string& id, tasks::TaskKind kind, CounterRng rng) {
  if (id == "noop") return std::make_unique<NoopController>();
  if (id == "push") return std::make_unique<PushController>();
  if (id == "position") return make_position_controller(rng);
  if (id == "auto") {
    if (kind == tasks::TaskKind::kPositionControl) return make_position_controller(rng);
    return std::make_unique<PushController>();
  }
  throw ConfigError("unknown controller: " + id);
}

}  // namespace swarm::harness
