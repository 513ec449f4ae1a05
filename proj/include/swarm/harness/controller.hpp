#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "swarm/control/control.hpp"
#include "swarm/observe/observe.hpp"
#include "swarm/rng.hpp"
#include "swarm/sim/world.hpp"
#include "swarm/tasks/tasks.hpp"

namespace swarm::harness {

// What a participant can see besides the swarm observation: the static
// geometry, the workpieces (always drawn), the goal and the physics
// constants. Never the robot positions themselves.
struct TaskView {
  tasks::TaskKind kind = tasks::TaskKind::kVaryNumber;
  sim::Arena arena;
  std::span<const sim::Obstacle> obstacles;
  std::span<const sim::Workpiece> workpieces;
  const tasks::GoalSpec* goal = nullptr;
  control::ControlScheme scheme = control::ControlScheme::kGlobalForce;
  observe::ObservationMode observation = observe::ObservationMode::kFullState;
  double dt = 1.0 / 60.0;
  double damping = 10.0;
  double robot_radius = 0.15;
  double v_max = 2.5;  // terminal speed under full force, m/s
  long step = 0;
};

// A policy consulted once per tick. One instance per trial.
class Controller {
 public:
  virtual ~Controller() = default;
  // Agent string stored in the trial record.
  virtual std::string name() const = 0;
  virtual control::ControlIntent step(const observe::Observation& obs, const TaskView& view) = 0;
};

class NoopController final : public Controller {
 public:
  std::string name() const override { return "scripted:noop"; }
  control::ControlIntent step(const observe::Observation&, const TaskView&) override { return {}; }
};

// Replays a fixed intent sequence, one entry per tick, then releases.
class ReplayController final : public Controller {
 public:
  explicit ReplayController(std::vector<control::ControlIntent> intents)
      : intents_(std::move(intents)) {}
  std::string name() const override { return "replay"; }
  control::ControlIntent step(const observe::Observation&, const TaskView&) override {
    return next_ < intents_.size() ? intents_[next_++] : control::ControlIntent{};
  }

 private:
  std::vector<control::ControlIntent> intents_;
  std::size_t next_ = 0;
};

struct PushParams {
  double standoff_margin = 0.3;  // m beyond object and swarm radii
  double keep_angle_cos = 0.85;  // hysteresis before switching key direction
};

// Two-phase pushing policy for region goals: bring the swarm to a staging
// point behind the object, then drive through the object toward the goal.
class PushController final : public Controller {
 public:
  explicit PushController(PushParams params = {}) : params_(params) {}
  std::string name() const override { return "scripted:push"; }
  control::ControlIntent step(const observe::Observation& obs, const TaskView& view) override;

  // Desired travel direction before quantization (exposed for tests).
  Vec2 desired_direction(const observe::Observation& obs, const TaskView& view);
  int phase() const { return phase_; }

 private:
  PushParams params_;
  int phase_ = 1;
  Vec2 last_key_;
};

// Nearest of the eight key directions (components in {-1, 0, 1}); zero for
// a zero vector.
Vec2 quantize_direction(const Vec2& v);

std::unique_ptr<Controller> make_position_controller(CounterRng rng);

// "noop", "push", "position", "auto" (position for position_control, push
// otherwise). Throws ConfigError for unknown ids. Replay controllers are
// built directly from their intent lists.
std::unique_ptr<Controller> make_controller(const std::string& id, tasks::TaskKind kind,
                                            CounterRng rng);

}  // namespace swarm::harness
