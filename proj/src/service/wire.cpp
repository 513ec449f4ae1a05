#include "swarm/service/wire.hpp"

#include <charconv>
#include <cmath>

#include "swarm/error.hpp"

namespace swarm::service {

using nlohmann::json;

std::string frame_message(std::string_view payload) {
  std::string out = std::to_string(payload.size());
  out += '\n';
  out += payload;
  return out;
}

std::string encode_message(const json& message) { return frame_message(std::string_view(message.dump())); }

std::optional<std::string> MessageReader::next() {
  const std::size_t nl = buffer_.find('\n');
  if (nl == std::string::npos) {
    if (buffer_.size() > 20) throw ConfigError("wire: length header too long");
    return std::nullopt;
  }
  std::size_t len = 0;
  const char* first = buffer_.data();
  const auto [ptr, ec] = std::from_chars(first, first + nl, len);
  if (nl == 0 || ec != std::errc() || ptr != first + nl) throw ConfigError("wire: bad length header");
  if (len > kMaxMessage) throw ConfigError("wire: message too large");
  if (buffer_.size() < nl + 1 + len) return std::nullopt;
  std::string payload = buffer_.substr(nl + 1, len);
  buffer_.erase(0, nl + 1 + len);
  return payload;
}

std::string_view to_string(EventType type) {
  switch (type) {
    case EventType::kKeyDown: return "key_down";
    case EventType::kKeyUp: return "key_up";
    case EventType::kPointerMove: return "pointer_move";
    case EventType::kPointerDown: return "pointer_down";
    case EventType::kPointerUp: return "pointer_up";
  }
  return "?";
}

namespace {

EventType event_type_from_string(std::string_view s) {
  for (auto t : {EventType::kKeyDown, EventType::kKeyUp, EventType::kPointerMove,
                 EventType::kPointerDown, EventType::kPointerUp}) {
    if (to_string(t) == s) return t;
  }
  throw ConfigError("event: unknown event type '" + std::string(s) + "'");
}

double finite_number(const json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_number()) {
    throw ConfigError(std::string("event: field ") + name + " must be a number");
  }
  const double v = j[name].get<double>();
  if (!std::isfinite(v)) throw ConfigError(std::string("event: field ") + name + " must be finite");
  return v;
}

}  // namespace

Vec2 key_vector(std::string_view key) {
  if (key == "left") return {-1, 0};
  if (key == "right") return {1, 0};
  if (key == "up") return {0, 1};
  if (key == "down") return {0, -1};
  throw ConfigError("event: unknown key '" + std::string(key) + "'");
}

json to_json(const InputEvent& e) {
  json j = {{"type", "event"}, {"event", to_string(e.type)}, {"seq", e.client_sequence}};
  if (e.type == EventType::kKeyDown || e.type == EventType::kKeyUp) {
    j["key"] = e.key;
  } else {
    j["x"] = e.position.x;
    j["y"] = e.position.y;
  }
  return j;
}

InputEvent event_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("event: not an object");
  if (!j.contains("event") || !j["event"].is_string()) throw ConfigError("event: field event missing");
  InputEvent e;
  e.type = event_type_from_string(j["event"].get<std::string>());
  if (!j.contains("seq") || !j["seq"].is_number_integer()) {
    throw ConfigError("event: field seq must be an integer");
  }
  e.client_sequence = j["seq"].get<long>();
  if (e.type == EventType::kKeyDown || e.type == EventType::kKeyUp) {
    if (!j.contains("key") || !j["key"].is_string()) throw ConfigError("event: field key missing");
    e.key = j["key"].get<std::string>();
    key_vector(e.key);
  } else {
    e.position = {finite_number(j, "x"), finite_number(j, "y")};
  }
  return e;
}

json to_json(const Frame& f) {
  json pieces = json::array();
  for (const auto& w : f.workpieces) {
    pieces.push_back({{"id", w.id}, {"x", w.pose.position.x}, {"y", w.pose.position.y}, {"angle", w.pose.angle}});
  }
  return {{"type", "frame"},
          {"step", f.step},
          {"elapsed", f.elapsed},
          {"status", f.status},
          {"observation", {{"mode", observe::to_string(f.mode)}, {"data", f.payload}}},
          {"workpieces", std::move(pieces)},
          {"goal_ref", f.goal_ref}};
}

Frame frame_from_json(const json& j) {
  try {
    Frame f;
    f.step = j.at("step").get<long>();
    f.elapsed = j.at("elapsed").get<double>();
    f.status = j.at("status").get<std::string>();
    f.mode = observe::observation_mode_from_string(j.at("observation").at("mode").get<std::string>());
    f.payload = j.at("observation").at("data").get<std::vector<double>>();
    for (const auto& w : j.at("workpieces")) {
      f.workpieces.push_back({w.at("id").get<int>(),
                              {{w.at("x").get<double>(), w.at("y").get<double>()}, w.at("angle").get<double>()}});
    }
    f.goal_ref = j.at("goal_ref").get<std::string>();
    return f;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("frame: ") + e.what());
  }
}

}  // namespace swarm::service
