#pragma once

#include <array>
#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarm/harness/trial.hpp"
#include "swarm/service/store.hpp"
#include "swarm/service/wire.hpp"

namespace swarm::service {

// First client message:
//   {"type":"start","token":"<32 hex>","task":"vary_noise","mode":"noise=1",
//    "agent":"<browser>","seed":12,"max_steps":18000}
// mode, seed, agent and max_steps are optional; a missing seed is drawn by
// the server.
struct StartRequest {
  std::string token;
  tasks::TaskKind kind = tasks::TaskKind::kVaryVisualization;
  std::optional<tasks::TaskMode> mode;
  std::optional<std::uint64_t> seed;
  std::string agent = "unknown";
  int max_steps = 18000;
};
StartRequest start_from_json(const nlohmann::json& j);

// One interactive trial. The server owns the world; the client only feeds
// input events, which are applied at the next tick in client_sequence order.
class Session {
 public:
  Session(harness::TrialConfig config, std::string agent, int frame_every = 2);

  // {"type":"hello","config":{...},"scenario_digest":...,"geometry":{...}}
  nlohmann::json hello() const;

  // Queues one client message. Event messages must carry strictly
  // increasing seq; {"type":"quit"} aborts. Throws ConfigError on a
  // malformed or out-of-order message (the caller aborts the session).
  void accept(const nlohmann::json& message);

  // One simulation tick. Returns a frame every frame_every steps and on the
  // final step.
  std::optional<Frame> tick();
  void abort(std::string reason);

  bool finished() const { return stepper_.finished(); }
  Frame frame() const;
  harness::TrialRecord record() const;
  nlohmann::json end_message(std::uint64_t record_id) const;
  const harness::TrialStepper& stepper() const { return stepper_; }
  long last_sequence() const { return last_sequence_; }
  const control::ControlIntent& intent() const { return intent_; }

 private:
  void apply(const InputEvent& e);

  harness::TrialConfig config_;
  std::string agent_;
  int frame_every_;
  harness::TrialStepper stepper_;
  std::vector<InputEvent> pending_;
  long last_sequence_ = 0;
  std::array<bool, 4> held_{};  // left, right, up, down
  control::ControlIntent intent_;
  bool aborted_ = false;
};

// Message transport for one client. receive() never blocks: it returns the
// next complete message or nothing.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::optional<std::string> receive() = 0;
  virtual bool send(const std::string& payload) = 0;
  virtual bool closed() const = 0;
};

struct LoopOptions {
  bool realtime = true;  // pace ticks at the world dt; false runs flat out
  int frame_every = 2;
  std::chrono::milliseconds start_timeout{10000};
};

// Drives one session over a transport: waits for the start message, sends
// hello, then per tick drains incoming messages, steps and sends frames.
// The terminal record (completed, timed out or aborted) is stored and
// echoed in an {"type":"end"} message. Returns the stored record, or
// nothing when the client never started a trial.
std::optional<harness::TrialRecord> run_session(Transport& transport, RecordStore& store,
                                                const TokenRegistry& tokens,
                                                const LoopOptions& options = {});

}  // namespace swarm::service
