#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "swarm/observe/observe.hpp"
#include "swarm/sim/world.hpp"

namespace swarm::service {

// Session messages are JSON texts framed as "<decimal byte length>\n<json>".
std::string frame_message(std::string_view payload);
std::string encode_message(const nlohmann::json& message);

// Incremental decoder for a byte stream of framed messages.
class MessageReader {
 public:
  static constexpr std::size_t kMaxMessage = 1 << 20;

  void feed(std::string_view bytes) { buffer_.append(bytes); }
  // Next complete payload, if any. Throws ConfigError on a bad header.
  std::optional<std::string> next();
  bool empty() const { return buffer_.empty(); }

 private:
  std::string buffer_;
};

enum class EventType { kKeyDown, kKeyUp, kPointerMove, kPointerDown, kPointerUp };
std::string_view to_string(EventType type);  // "key_down", ...

struct InputEvent {
  EventType type = EventType::kKeyDown;
  std::string key;  // "left", "right", "up", "down" for key events
  Vec2 position;    // world coordinates for pointer events
  long client_sequence = 0;

  friend bool operator==(const InputEvent&, const InputEvent&) = default;
};

// {"type":"event","event":"key_down","key":"left","seq":3}
// {"type":"event","event":"pointer_move","x":1.5,"y":2,"seq":4}
nlohmann::json to_json(const InputEvent& event);
// Throws ConfigError on anything malformed.
InputEvent event_from_json(const nlohmann::json& j);

// Unit step of an arrow key; throws ConfigError for other keys.
Vec2 key_vector(std::string_view key);

struct WorkpiecePose {
  int id = 0;
  sim::Pose pose;
};

struct Frame {
  long step = 0;
  double elapsed = 0.0;  // s of simulated time
  std::string status;    // running, complete, timeout, aborted
  observe::ObservationMode mode = observe::ObservationMode::kFullState;
  std::vector<double> payload;  // observe::payload_scalars
  std::vector<WorkpiecePose> workpieces;
  std::string goal_ref;  // scenario digest; the goal geometry itself is in the hello message
};

nlohmann::json to_json(const Frame& frame);
Frame frame_from_json(const nlohmann::json& j);

}  // namespace swarm::service
