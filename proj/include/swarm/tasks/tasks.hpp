#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "swarm/control/control.hpp"
#include "swarm/observe/observe.hpp"
#include "swarm/rng.hpp"
#include "swarm/sim/world.hpp"
#include "swarm/tasks/scenario.hpp"

namespace swarm::tasks {

enum class TaskKind { kVaryNumber, kVaryControl, kVaryVisualization, kVaryNoise, kPositionControl };

inline constexpr TaskKind kAllTaskKinds[] = {
    TaskKind::kVaryNumber, TaskKind::kVaryControl, TaskKind::kVaryVisualization,
    TaskKind::kVaryNoise, TaskKind::kPositionControl};

struct VaryNumberMode {
  int robots = 100;
  friend bool operator==(const VaryNumberMode&, const VaryNumberMode&) = default;
};
struct VaryControlMode {
  control::ControlScheme scheme = control::ControlScheme::kGlobalForce;
  friend bool operator==(const VaryControlMode&, const VaryControlMode&) = default;
};
struct VaryVisualizationMode {
  observe::ObservationMode observation = observe::ObservationMode::kFullState;
  friend bool operator==(const VaryVisualizationMode&, const VaryVisualizationMode&) = default;
};
struct VaryNoiseMode {
  double noise = 0.0;  // M
  friend bool operator==(const VaryNoiseMode&, const VaryNoiseMode&) = default;
};
struct PositionControlMode {
  int robots = 1;
  friend bool operator==(const PositionControlMode&, const PositionControlMode&) = default;
};

// Alternatives are in TaskKind order.
using TaskMode = std::variant<VaryNumberMode, VaryControlMode, VaryVisualizationMode,
                              VaryNoiseMode, PositionControlMode>;

TaskKind kind_of(const TaskMode& mode);

// "vary_number", "vary_control", ...
std::string_view to_string(TaskKind kind);
TaskKind task_kind_from_string(std::string_view name);

// "n=100", "scheme=attractive", "obs=convex_hull", "noise=1.5", "n=4".
std::string mode_label(const TaskMode& mode);
// Inverse of mode_label; throws ConfigError on a label that does not belong
// to kind or is not in the kind's mode set.
TaskMode parse_mode(TaskKind kind, std::string_view label,
                    const ScenarioDocument& doc = default_scenarios());

std::string_view to_string(control::ControlScheme scheme);
control::ControlScheme control_scheme_from_string(std::string_view name);

// The kind's full mode set, in document order.
std::vector<TaskMode> mode_set(TaskKind kind, const ScenarioDocument& doc = default_scenarios());
TaskMode sample_mode(TaskKind kind, CounterRng& rng,
                     const ScenarioDocument& doc = default_scenarios());

struct RegionGoal {
  std::vector<Vec2> region;  // convex, counter-clockwise
  std::vector<int> workpieces;
  int dwell_steps = 30;
};
struct PyramidGoal {
  std::vector<sim::Pose> targets;
  double position_tolerance = 0.1;
  double angle_tolerance = 0.1745;  // rad, compared modulo pi/2
  int dwell_steps = 30;
};
struct PatternGoal {
  std::vector<Vec2> points;
  double tolerance = 0.15;
  int dwell_steps = 30;
};
using GoalSpec = std::variant<RegionGoal, PyramidGoal, PatternGoal>;

enum class Phase { kInstantiation, kSimulation, kEvaluation, kSubmission };
enum class Evaluation { kRunning, kComplete };

// Everything about a trial that follows from (kind, mode) besides geometry.
struct TaskSettings {
  control::ControlScheme scheme = control::ControlScheme::kGlobalForce;
  observe::ObservationMode observation = observe::ObservationMode::kFullState;
  control::NoiseConfig noise;
  control::ControlParams control;
  double ellipse_k = 2.0;
  int max_steps = 18000;
};

struct TaskState {
  TaskKind kind = TaskKind::kVaryNumber;
  TaskMode mode;
  sim::World world;
  GoalSpec goal;
  TaskSettings settings;
  std::string scenario_digest;
  Phase phase = Phase::kInstantiation;
  long step = 0;
  int satisfied_streak = 0;
};

// Builds the scenario for (kind, mode). The seed only perturbs the start
// lattice; geometry is fixed by the document. Throws ConfigError when the
// mode does not belong to kind or is outside its mode set.
TaskState instantiate_task(TaskKind kind, const TaskMode& mode, std::uint64_t seed,
                           const ScenarioDocument& doc = default_scenarios());

// First n points of the block 'A'. Throws ConfigError for n outside 1..10.
std::vector<Vec2> goal_pattern(int n, const ScenarioDocument& doc = default_scenarios());

// Goal predicate on the current world, without dwell bookkeeping.
bool goal_satisfied(const sim::World& world, const GoalSpec& goal);

int dwell_steps(const GoalSpec& goal);

// Lifecycle. Each call throws std::logic_error on a transition the
// lifecycle does not allow.
void begin_simulation(TaskState& state);  // Instantiation|Evaluation -> Simulation
void step_task(TaskState& state, std::span<const Vec2> robot_forces);  // Simulation -> Evaluation
// Evaluation -> Simulation on Running; stays in Evaluation on Complete.
Evaluation evaluate_task(TaskState& state);
void submit(TaskState& state);  // Simulation|Evaluation -> Submission

// Perfect matching of robots to goal points with every pair within tol.
bool pattern_matched(std::span<const Vec2> robots, std::span<const Vec2> goals, double tol);

// Hole test on grid cells: true when some empty cell is enclosed by the
// pattern (4-connected background that cannot reach the border).
bool cells_enclose_void(std::span<const std::pair<int, int>> cells);

std::vector<std::pair<int, int>> pattern_cells(int n, const ScenarioDocument& doc = default_scenarios());

}  // namespace swarm::tasks
