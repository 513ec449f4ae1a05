#include "swarm/harness/trial.hpp"

#include <exception>

#include "swarm/error.hpp"

namespace swarm::harness {

namespace {

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ';' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

TrialStreams trial_streams(std::uint64_t seed) {
  const CounterRng root(seed);
  return {root.split("noise"), root.split("controller"), root.split("mode")};
}

tasks::TaskState prepare_task(const TrialConfig& config) {
  if (config.max_steps <= 0) throw ConfigError("max_steps must be positive");
  tasks::TaskMode mode;
  if (config.mode) {
    mode = *config.mode;
  } else {
    CounterRng rng = trial_streams(config.seed).mode;
    mode = tasks::sample_mode(config.kind, rng);
  }
  return tasks::instantiate_task(config.kind, mode, config.seed);
}

TrialStepper::TrialStepper(tasks::TaskState state, std::uint64_t seed, int max_steps)
    : state_(std::move(state)),
      seed_(seed),
      max_steps_(max_steps),
      noise_(trial_streams(seed).noise),
      tracker_(state_.settings.scheme, state_.world.params.dt) {
  if (max_steps_ <= 0) throw ConfigError("max_steps must be positive");
  if (state_.world.robots.empty()) throw ConfigError("trial needs at least one robot");
  if (state_.phase == tasks::Phase::kInstantiation) tasks::begin_simulation(state_);
  if (state_.phase != tasks::Phase::kSimulation) throw ConfigError("trial must start in simulation");
}

observe::Observation TrialStepper::observe() const {
  std::vector<Vec2> positions;
  positions.reserve(state_.world.robots.size());
  for (const auto& r : state_.world.robots) positions.push_back(r.position);
  return observe::make_observation(state_.settings.observation, positions,
                                   state_.world.robots.front().radius, state_.settings.ellipse_k);
}

TaskView TrialStepper::view() const {
  TaskView v;
  v.kind = state_.kind;
  v.arena = state_.world.arena;
  v.obstacles = state_.world.obstacles;
  v.workpieces = state_.world.workpieces;
  v.goal = &state_.goal;
  v.scheme = state_.settings.scheme;
  v.observation = state_.settings.observation;
  v.dt = state_.world.params.dt;
  v.damping = state_.world.params.damping;
  const auto& robot = state_.world.robots.front();
  v.robot_radius = robot.radius;
  v.v_max = state_.settings.control.u_max / (robot.mass * v.damping);
  v.step = state_.step;
  return v;
}

void TrialStepper::tick(const control::ControlIntent& intent) {
  if (finished_) return;
  input_ = tracker_.update(intent);
  std::vector<Vec2> positions;
  positions.reserve(state_.world.robots.size());
  for (const auto& r : state_.world.robots) positions.push_back(r.position);
  const auto& settings = state_.settings;
  const auto forces = control::control_forces(settings.scheme, input_, positions, settings.control);
  const auto noise = control::sample_noise(noise_, positions.size(), settings.noise, settings.control);
  const auto total = control::total_force(forces, noise);
  tasks::step_task(state_, total);
  if (tasks::evaluate_task(state_) == tasks::Evaluation::kComplete) {
    tasks::submit(state_);
    finished_ = true;
    completed_ = true;
  } else if (state_.step >= max_steps_) {
    tasks::submit(state_);
    finished_ = true;
  }
}

void TrialStepper::abort(std::string reason) {
  if (finished_) return;
  tasks::submit(state_);
  finished_ = true;
  failure_ = sanitize(std::move(reason));
}

TrialRecord TrialStepper::record(const std::string& agent, const std::string& participant) const {
  TrialRecord r;
  r.experiment_name = std::string(tasks::to_string(state_.kind));
  r.participant_id = participant;
  r.steps = state_.step;
  r.duration = static_cast<double>(state_.step) * state_.world.params.dt;
  r.num_robots = static_cast<int>(state_.world.robots.size());
  r.mode_detail = tasks::mode_label(state_.mode) + ";max_steps=" + std::to_string(max_steps_) +
                  ";ellipse_k=" + format_double(state_.settings.ellipse_k);
  if (!failure_.empty()) r.mode_detail += ";failure=" + failure_;
  r.agent = agent;
  r.seed = seed_;
  r.completed = completed_;
  r.scenario_digest = state_.scenario_digest;
  return r;
}

TrialRecord run_prepared(tasks::TaskState state, const TrialConfig& config, Controller& controller,
                         const StepObserver& observer) {
  TrialStepper stepper(std::move(state), config.seed, config.max_steps);
  while (!stepper.finished()) {
    control::ControlIntent intent;
    try {
      intent = controller.step(stepper.observe(), stepper.view());
    } catch (const std::exception& e) {
      stepper.abort(std::string("controller: ") + e.what());
      break;
    }
    stepper.tick(intent);
    if (observer) observer(stepper.state());
  }
  return stepper.record(controller.name(), config.participant_id);
}

TrialRecord run_trial(const TrialConfig& config, Controller& controller, const StepObserver& observer) {
  return run_prepared(prepare_task(config), config, controller, observer);
}

TrialRecord run_trial(const TrialConfig& config, const StepObserver& observer) {
  auto controller = make_controller(config.controller_id, config.kind, trial_streams(config.seed).controller);
  return run_trial(config, *controller, observer);
}

}  // namespace swarm::harness
