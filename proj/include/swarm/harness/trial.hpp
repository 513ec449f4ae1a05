#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "swarm/control/control.hpp"
#include "swarm/harness/controller.hpp"
#include "swarm/harness/record.hpp"
#include "swarm/observe/observe.hpp"
#include "swarm/rng.hpp"
#include "swarm/tasks/tasks.hpp"

namespace swarm::harness {

struct TrialConfig {
  tasks::TaskKind kind = tasks::TaskKind::kVaryVisualization;
  std::optional<tasks::TaskMode> mode;  // empty: drawn from the seed
  std::uint64_t seed = 0;
  int max_steps = 18000;
  std::string controller_id = "noop";
  std::string participant_id = "headless";
};

// Named sub-streams of one trial's generator.
struct TrialStreams {
  CounterRng noise;
  CounterRng controller;
  CounterRng mode;
};
TrialStreams trial_streams(std::uint64_t seed);

// Resolves the mode (sampling it when absent) and instantiates the task.
tasks::TaskState prepare_task(const TrialConfig& config);

// One trial's simulation loop, shared by headless runs and live sessions.
// Each tick: input tracking -> control forces -> noise -> total force ->
// world step -> evaluation.
class TrialStepper {
 public:
  TrialStepper(tasks::TaskState state, std::uint64_t seed, int max_steps);

  observe::Observation observe() const;
  TaskView view() const;

  // Applies one tick. No-op once finished.
  void tick(const control::ControlIntent& intent);
  // Ends the trial early (controller failure, session abort).
  void abort(std::string reason);

  bool finished() const { return finished_; }
  bool completed() const { return completed_; }
  const tasks::TaskState& state() const { return state_; }
  int max_steps() const { return max_steps_; }
  const control::InputState& input() const { return input_; }

  TrialRecord record(const std::string& agent, const std::string& participant) const;

 private:
  tasks::TaskState state_;
  std::uint64_t seed_;
  int max_steps_;
  CounterRng noise_;
  control::InputTracker tracker_;
  control::InputState input_;
  bool finished_ = false;
  bool completed_ = false;
  std::string failure_;
};

using StepObserver = std::function<void(const tasks::TaskState&)>;

// Runs one trial to completion or max_steps. A throwing controller ends
// the trial with completed=false and a failure note in mode_detail.
TrialRecord run_trial(const TrialConfig& config, Controller& controller,
                      const StepObserver& observer = {});
// Same, with the controller built from config.controller_id.
TrialRecord run_trial(const TrialConfig& config, const StepObserver& observer = {});

// Runs from an already prepared state (tests that edit the start layout).
TrialRecord run_prepared(tasks::TaskState state, const TrialConfig& config,
                         Controller& controller, const StepObserver& observer = {});

}  // namespace swarm::harness
