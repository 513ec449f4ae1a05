#include "swarm/service/session.hpp"

#include <algorithm>
#include <random>
#include <thread>

#include "swarm/error.hpp"

namespace swarm::service {

using nlohmann::json;

namespace {

json points_json(std::span<const Vec2> pts) {
  json out = json::array();
  for (const Vec2& p : pts) out.push_back({p.x, p.y});
  return out;
}

json goal_json(const tasks::GoalSpec& goal) {
  return std::visit(
      [](const auto& g) -> json {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, tasks::RegionGoal>) {
          return {{"kind", "region"}, {"region", points_json(g.region)}, {"workpieces", g.workpieces},
                  {"dwell_steps", g.dwell_steps}};
        } else if constexpr (std::is_same_v<G, tasks::PyramidGoal>) {
          json targets = json::array();
          for (const auto& t : g.targets) targets.push_back({t.position.x, t.position.y, t.angle});
          return {{"kind", "pyramid"}, {"targets", targets},
                  {"position_tolerance", g.position_tolerance},
                  {"angle_tolerance", g.angle_tolerance}, {"dwell_steps", g.dwell_steps}};
        } else {
          return {{"kind", "pattern"}, {"points", points_json(g.points)}, {"tolerance", g.tolerance},
                  {"dwell_steps", g.dwell_steps}};
        }
      },
      goal);
}

int key_index(std::string_view key) {
  if (key == "left") return 0;
  if (key == "right") return 1;
  if (key == "up") return 2;
  return 3;
}

}  // namespace

StartRequest start_from_json(const json& j) {
  if (!j.is_object() || j.value("type", "") != "start") throw ConfigError("expected a start message");
  StartRequest r;
  try {
    r.token = j.at("token").get<std::string>();
    r.kind = tasks::task_kind_from_string(j.at("task").get<std::string>());
    const std::string mode = j.value("mode", std::string("random"));
    if (mode != "random") r.mode = tasks::parse_mode(r.kind, mode);
    if (j.contains("seed")) r.seed = j["seed"].get<std::uint64_t>();
    r.agent = j.value("agent", r.agent);
    r.max_steps = j.value("max_steps", r.max_steps);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("start: ") + e.what());
  }
  if (r.max_steps <= 0) throw ConfigError("start: max_steps must be positive");
  if (!TokenRegistry::well_formed(r.token)) throw ConfigError("start: malformed token");
  return r;
}

Session::Session(harness::TrialConfig config, std::string agent, int frame_every)
    : config_(std::move(config)),
      agent_(std::move(agent)),
      frame_every_(std::max(1, frame_every)),
      stepper_(harness::prepare_task(config_), config_.seed, config_.max_steps) {}

json Session::hello() const {
  const auto& s = stepper_.state();
  const auto& w = s.world;
  json obstacles = json::array();
  for (const auto& o : w.obstacles) obstacles.push_back(points_json(o.vertices));
  json pieces = json::array();
  for (const auto& p : w.workpieces) {
    pieces.push_back({{"id", p.id}, {"vertices", points_json(p.local_vertices)}});
  }
  return {{"type", "hello"},
          {"config",
           {{"task", tasks::to_string(config_.kind)},
            {"mode", tasks::mode_label(s.mode)},
            {"seed", config_.seed},
            {"max_steps", config_.max_steps},
            {"participant", config_.participant_id},
            {"agent", agent_}}},
          {"scenario_digest", s.scenario_digest},
          {"geometry",
           {{"arena", {w.arena.min.x, w.arena.min.y, w.arena.max.x, w.arena.max.y}},
            {"obstacles", obstacles},
            {"workpieces", pieces},
            {"goal", goal_json(s.goal)},
            {"num_robots", w.robots.size()},
            {"robot_radius", w.robots.front().radius},
            {"observation", observe::to_string(s.settings.observation)},
            {"scheme", tasks::to_string(s.settings.scheme)},
            {"dt", w.params.dt},
            {"frame_every", frame_every_}}}};
}

void Session::accept(const json& message) {
  if (!message.is_object() || !message.contains("type") || !message["type"].is_string()) {
    throw ConfigError("message without type");
  }
  const auto type = message["type"].get<std::string>();
  if (type == "quit") {
    abort("client quit");
    return;
  }
  if (type != "event") throw ConfigError("unexpected message type '" + type + "'");
  const InputEvent e = event_from_json(message);
  if (e.client_sequence <= last_sequence_) {
    throw ConfigError("non-increasing client sequence " + std::to_string(e.client_sequence));
  }
  last_sequence_ = e.client_sequence;
  pending_.push_back(e);
}

void Session::apply(const InputEvent& e) {
  switch (e.type) {
    case EventType::kKeyDown: held_[key_index(e.key)] = true; break;
    case EventType::kKeyUp: held_[key_index(e.key)] = false; break;
    case EventType::kPointerMove: intent_.pointer = e.position; break;
    case EventType::kPointerDown:
      intent_.pointer = e.position;
      intent_.pointer_engaged = true;
      break;
    case EventType::kPointerUp:
      intent_.pointer = e.position;
      intent_.pointer_engaged = false;
      break;
  }
  intent_.key_direction = {static_cast<double>(held_[1]) - static_cast<double>(held_[0]),
                           static_cast<double>(held_[2]) - static_cast<double>(held_[3])};
}

std::optional<Frame> Session::tick() {
  if (finished()) return std::nullopt;
  // accept() enforces increasing order, so pending_ is already sorted.
  for (const auto& e : pending_) apply(e);
  pending_.clear();
  stepper_.tick(intent_);
  if (finished() || stepper_.state().step % frame_every_ == 0) return frame();
  return std::nullopt;
}

void Session::abort(std::string reason) {
  if (finished()) return;
  aborted_ = true;
  stepper_.abort(std::move(reason));
}

Frame Session::frame() const {
  const auto& s = stepper_.state();
  Frame f;
  f.step = s.step;
  f.elapsed = static_cast<double>(s.step) * s.world.params.dt;
  if (!finished()) f.status = "running";
  else if (stepper_.completed()) f.status = "complete";
  else if (aborted_) f.status = "aborted";
  else f.status = "timeout";
  f.mode = s.settings.observation;
  f.payload = observe::payload_scalars(stepper_.observe());
  for (const auto& w : s.world.workpieces) f.workpieces.push_back({w.id, w.pose()});
  f.goal_ref = s.scenario_digest;
  return f;
}

harness::TrialRecord Session::record() const { return stepper_.record(agent_, config_.participant_id); }

json Session::end_message(std::uint64_t record_id) const {
  return {{"type", "end"}, {"status", frame().status}, {"id", record_id},
          {"record", harness::to_json(record())}};
}

std::optional<harness::TrialRecord> run_session(Transport& transport, RecordStore& store,
                                                const TokenRegistry& tokens,
                                                const LoopOptions& options) {
  using clock = std::chrono::steady_clock;
  auto send_error = [&](const std::string& what) {
    transport.send(json{{"type", "error"}, {"message", what}}.dump());
  };

  // Start handshake.
  std::optional<StartRequest> request;
  const auto give_up = clock::now() + options.start_timeout;
  while (!request) {
    if (auto msg = transport.receive()) {
      try {
        request = start_from_json(json::parse(*msg));
      } catch (const std::exception& e) {
        send_error(e.what());
        return std::nullopt;
      }
      if (!tokens.known(request->token)) {
        send_error("start: unknown token");
        return std::nullopt;
      }
      break;
    }
    if (transport.closed() || clock::now() > give_up) return std::nullopt;
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }

  harness::TrialConfig config;
  config.kind = request->kind;
  config.mode = request->mode;
  config.seed = request->seed ? *request->seed : (std::uint64_t{std::random_device{}()} << 32) ^ std::random_device{}();
  config.max_steps = request->max_steps;
  config.controller_id = "human";
  config.participant_id = request->token;

  Session session(config, request->agent, options.frame_every);
  transport.send(session.hello().dump());

  const auto dt = std::chrono::duration_cast<clock::duration>(
      std::chrono::duration<double>(session.stepper().state().world.params.dt));
  auto next_tick = clock::now();
  while (!session.finished()) {
    while (auto msg = transport.receive()) {
      try {
        session.accept(json::parse(*msg));
      } catch (const std::exception& e) {
        session.abort(std::string("protocol: ") + e.what());
        break;
      }
    }
    if (session.finished()) break;
    if (transport.closed()) {
      session.abort("client disconnected");
      break;
    }
    if (auto frame = session.tick()) {
      if (!transport.send(to_json(*frame).dump())) session.abort("client disconnected");
    }
    if (options.realtime) {
      next_tick += dt;
      std::this_thread::sleep_until(next_tick);
    }
  }

  const auto record = session.record();
  const auto stored = store.store(record);
  transport.send(session.end_message(stored.id).dump());
  return record;
}

}  // namespace swarm::service
