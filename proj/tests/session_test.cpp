#include <gtest/gtest.h>

#include <atomic>
#include <deque>
#include <filesystem>

#include "swarm/error.hpp"
#include "swarm/service/gateway.hpp"
#include "swarm/service/session.hpp"

using namespace swarm;
using namespace swarm::service;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_log() {
  static std::atomic<int> counter{0};
  auto dir = fs::temp_directory_path() /
             ("swarm_session_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(dir);
  return dir / "records.jsonl";
}

harness::TrialConfig vis_config(observe::ObservationMode mode, int max_steps = 200) {
  harness::TrialConfig c;
  c.kind = tasks::TaskKind::kVaryVisualization;
  c.mode = tasks::VaryVisualizationMode{mode};
  c.seed = 4;
  c.max_steps = max_steps;
  c.participant_id = "0123456789abcdef0123456789abcdef";
  return c;
}

// Events that turn intent `from` into intent `to`.
std::vector<InputEvent> diff_events(const control::ControlIntent& from, const control::ControlIntent& to,
                                    long& seq) {
  std::vector<InputEvent> out;
  auto keys = [](const Vec2& d) {
    std::vector<std::string> k;
    if (d.x < 0) k.push_back("left");
    if (d.x > 0) k.push_back("right");
    if (d.y > 0) k.push_back("up");
    if (d.y < 0) k.push_back("down");
    return k;
  };
  const auto before = keys(from.key_direction);
  const auto after = keys(to.key_direction);
  for (const auto& k : before) {
    if (std::find(after.begin(), after.end(), k) == after.end()) {
      out.push_back({EventType::kKeyUp, k, {}, ++seq});
    }
  }
  for (const auto& k : after) {
    if (std::find(before.begin(), before.end(), k) == before.end()) {
      out.push_back({EventType::kKeyDown, k, {}, ++seq});
    }
  }
  if (to.pointer_engaged != from.pointer_engaged) {
    out.push_back({to.pointer_engaged ? EventType::kPointerDown : EventType::kPointerUp, "", to.pointer, ++seq});
  } else if (to.pointer != from.pointer) {
    out.push_back({EventType::kPointerMove, "", to.pointer, ++seq});
  }
  return out;
}

// Hands out messages in rounds: everything in round r is seen before tick r + 1.
class ScriptedTransport final : public Transport {
 public:
  explicit ScriptedTransport(std::vector<std::vector<std::string>> rounds, long close_after = -1)
      : rounds_(std::move(rounds)), close_after_(close_after) {}

  std::optional<std::string> receive() override {
    if (round_ < rounds_.size() && index_ < rounds_[round_].size()) return rounds_[round_][index_++];
    ++round_;
    index_ = 0;
    return std::nullopt;
  }
  bool send(const std::string& payload) override {
    sent.push_back(json::parse(payload));
    return true;
  }
  bool closed() const override { return close_after_ >= 0 && static_cast<long>(round_) > close_after_; }

  std::vector<json> sent;

 private:
  std::vector<std::vector<std::string>> rounds_;
  std::size_t round_ = 0;
  std::size_t index_ = 0;
  long close_after_;
};

json start_message(const std::string& token, int max_steps, const std::string& mode = "obs=full_state") {
  return {{"type", "start"}, {"token", token}, {"task", "vary_visualization"}, {"mode", mode},
          {"seed", 4}, {"max_steps", max_steps}, {"agent", "test-client"}};
}

}  // namespace

TEST(Wire, FramingSurvivesFragmentation) {
  const std::string bytes = frame_message(std::string_view("{\"a\":1}")) + frame_message(std::string_view("")) +
                            encode_message(json{{"b", "x\ny"}});
  MessageReader reader;
  std::vector<std::string> got;
  for (char c : bytes) {
    reader.feed(std::string_view(&c, 1));
    while (auto m = reader.next()) got.push_back(*m);
  }
  ASSERT_EQ(got.size(), 3u);
  EXPECT_EQ(got[0], "{\"a\":1}");
  EXPECT_EQ(got[1], "");
  EXPECT_EQ(json::parse(got[2])["b"], "x\ny");
  EXPECT_TRUE(reader.empty());
}

TEST(Wire, BadHeaders) {
  for (const char* bad : {"abc\n{}", "\n", "-1\n", "99999999999\n"}) {
    MessageReader reader;
    reader.feed(bad);
    EXPECT_THROW(reader.next(), ConfigError) << bad;
  }
  MessageReader reader;
  reader.feed(std::string(30, '1'));
  EXPECT_THROW(reader.next(), ConfigError);
}

TEST(Wire, EventRoundTrip) {
  const InputEvent key{EventType::kKeyDown, "left", {}, 7};
  EXPECT_EQ(event_from_json(to_json(key)), key);
  const InputEvent ptr{EventType::kPointerMove, "", {1.5, -2.25}, 8};
  EXPECT_EQ(event_from_json(to_json(ptr)), ptr);
  EXPECT_THROW(event_from_json(json{{"event", "key_down"}, {"key", "space"}, {"seq", 1}}), ConfigError);
  EXPECT_THROW(event_from_json(json{{"event", "jump"}, {"seq", 1}}), ConfigError);
  EXPECT_THROW(event_from_json(json{{"event", "pointer_move"}, {"x", 1}, {"seq", 1}}), ConfigError);
  EXPECT_THROW(event_from_json(json{{"event", "key_up"}, {"key", "up"}}), ConfigError);
}

TEST(Session, PayloadBudgets) {
  using observe::ObservationMode;
  for (auto mode : {ObservationMode::kFullState, ObservationMode::kConvexHull, ObservationMode::kMean,
                    ObservationMode::kMeanVariance}) {
    Session s(vis_config(mode), "t");
    const auto wire = to_json(s.frame()).dump();
    const auto frame = frame_from_json(json::parse(wire));
    const auto n = frame.payload.size();
    EXPECT_EQ(frame.mode, mode);
    switch (mode) {
      case ObservationMode::kFullState: EXPECT_EQ(n, 200u); break;
      case ObservationMode::kConvexHull:
        EXPECT_LE(n, 200u);
        EXPECT_EQ(n % 2, 0u);
        EXPECT_GE(n, 6u);
        break;
      case ObservationMode::kMean: EXPECT_EQ(n, 2u); break;
      case ObservationMode::kMeanVariance: EXPECT_EQ(n, 7u); break;
    }
    ASSERT_EQ(frame.workpieces.size(), 1u);
  }
}

TEST(Session, HelloEchoesConfig) {
  Session s(vis_config(observe::ObservationMode::kMean), "agent-x");
  const auto h = s.hello();
  EXPECT_EQ(h["type"], "hello");
  EXPECT_EQ(h["config"]["task"], "vary_visualization");
  EXPECT_EQ(h["config"]["mode"], "obs=mean");
  EXPECT_EQ(h["config"]["seed"], 4);
  EXPECT_EQ(h["config"]["max_steps"], 200);
  EXPECT_EQ(h["scenario_digest"], tasks::default_scenarios().digest());
  EXPECT_EQ(h["geometry"]["num_robots"], 100);
  EXPECT_EQ(h["geometry"]["goal"]["kind"], "region");
  EXPECT_EQ(h["geometry"]["obstacles"].size(), 1u);
}

TEST(Session, FramesEverySecondStepAndTimeout) {
  Session s(vis_config(observe::ObservationMode::kFullState, 41), "t");
  std::vector<long> steps;
  while (!s.finished()) {
    if (auto f = s.tick()) steps.push_back(f->step);
  }
  ASSERT_EQ(steps.size(), 21u);
  for (std::size_t i = 0; i + 1 < steps.size(); ++i) EXPECT_EQ(steps[i], 2 * static_cast<long>(i + 1));
  EXPECT_EQ(steps.back(), 41);
  EXPECT_EQ(s.frame().status, "timeout");
  const auto r = s.record();
  EXPECT_FALSE(r.completed);
  EXPECT_EQ(r.steps, 41);
  EXPECT_FALSE(s.tick());
}

TEST(Session, OutOfOrderSequenceIsRejected) {
  Session s(vis_config(observe::ObservationMode::kMean), "t");
  s.accept(to_json(InputEvent{EventType::kKeyDown, "up", {}, 5}));
  EXPECT_THROW(s.accept(to_json(InputEvent{EventType::kKeyUp, "up", {}, 5})), ConfigError);
  EXPECT_THROW(s.accept(json{{"type", "teleport"}}), ConfigError);
}

TEST(Session, KeysCombineIntoDirections) {
  Session s(vis_config(observe::ObservationMode::kMean), "t");
  s.accept(to_json(InputEvent{EventType::kKeyDown, "up", {}, 1}));
  s.accept(to_json(InputEvent{EventType::kKeyDown, "left", {}, 2}));
  s.tick();
  EXPECT_EQ(s.intent().key_direction, (Vec2{-1, 1}));
  s.accept(to_json(InputEvent{EventType::kKeyDown, "right", {}, 3}));
  s.tick();
  EXPECT_EQ(s.intent().key_direction, (Vec2{0, 1}));
  s.accept(to_json(InputEvent{EventType::kKeyUp, "up", {}, 4}));
  s.accept(to_json(InputEvent{EventType::kKeyUp, "left", {}, 5}));
  s.tick();
  EXPECT_EQ(s.intent().key_direction, (Vec2{1, 0}));
}

// A client replaying tick-aligned events reproduces the headless run.
TEST(Session, ReplayMatchesHeadless) {
  auto config = vis_config(observe::ObservationMode::kFullState, 4000);
  config.controller_id = "push";
  auto inner = harness::make_controller("push", config.kind, harness::trial_streams(config.seed).controller);
  std::vector<control::ControlIntent> intents;
  struct Rec : harness::Controller {
    harness::Controller& in;
    std::vector<control::ControlIntent>& out;
    Rec(harness::Controller& i, std::vector<control::ControlIntent>& o) : in(i), out(o) {}
    std::string name() const override { return in.name(); }
    control::ControlIntent step(const observe::Observation& o, const harness::TaskView& v) override {
      out.push_back(in.step(o, v));
      return out.back();
    }
  } rec(*inner, intents);
  const auto headless = harness::run_trial(config, rec);
  ASSERT_TRUE(headless.completed);

  Session s(config, "replay-client");
  control::ControlIntent current;
  long seq = 0;
  for (const auto& target : intents) {
    for (const auto& e : diff_events(current, target, seq)) s.accept(to_json(e));
    current = target;
    s.tick();
  }
  ASSERT_TRUE(s.finished());
  const auto live = s.record();
  EXPECT_TRUE(live.completed);
  EXPECT_EQ(live.steps, headless.steps);
  EXPECT_EQ(live.duration, headless.duration);
  EXPECT_EQ(live.mode_detail, headless.mode_detail);
}

TEST(SessionLoop, NoInputTimesOutAndIsStored) {
  TokenRegistry tokens;
  const auto token = tokens.issue();
  RecordStore store(fresh_log());
  ScriptedTransport transport({{start_message(token, 30).dump()}});
  LoopOptions opt;
  opt.realtime = false;
  const auto r = run_session(transport, store, tokens, opt);
  ASSERT_TRUE(r);
  EXPECT_FALSE(r->completed);
  EXPECT_EQ(r->steps, 30);
  EXPECT_EQ(r->participant_id, token);
  EXPECT_EQ(r->agent, "test-client");
  ASSERT_EQ(store.size(), 1u);
  EXPECT_EQ(store.records()[0], *r);

  ASSERT_GE(transport.sent.size(), 3u);
  EXPECT_EQ(transport.sent.front()["type"], "hello");
  EXPECT_EQ(transport.sent.back()["type"], "end");
  EXPECT_EQ(transport.sent.back()["status"], "timeout");
  EXPECT_EQ(transport.sent.back()["id"], 1);
  long frames = 0;
  for (const auto& m : transport.sent) frames += m["type"] == "frame";
  EXPECT_EQ(frames, 15);
}

TEST(SessionLoop, UnknownTokenIsRefused) {
  TokenRegistry tokens;
  RecordStore store(fresh_log());
  ScriptedTransport transport({{start_message("0123456789abcdef0123456789abcdef", 30).dump()}});
  LoopOptions opt;
  opt.realtime = false;
  EXPECT_FALSE(run_session(transport, store, tokens, opt));
  EXPECT_EQ(store.size(), 0u);
  ASSERT_EQ(transport.sent.size(), 1u);
  EXPECT_EQ(transport.sent[0]["type"], "error");
}

TEST(SessionLoop, BadSequenceAborts) {
  TokenRegistry tokens;
  const auto token = tokens.issue();
  RecordStore store(fresh_log());
  ScriptedTransport transport({{start_message(token, 600).dump()},
                               {to_json(InputEvent{EventType::kKeyDown, "up", {}, 2}).dump()},
                               {to_json(InputEvent{EventType::kKeyUp, "up", {}, 1}).dump()}});
  LoopOptions opt;
  opt.realtime = false;
  const auto r = run_session(transport, store, tokens, opt);
  ASSERT_TRUE(r);
  EXPECT_FALSE(r->completed);
  EXPECT_EQ(r->steps, 2);
  EXPECT_NE(r->mode_detail.find("failure=protocol"), std::string::npos) << r->mode_detail;
  EXPECT_EQ(store.size(), 1u);
  EXPECT_EQ(transport.sent.back()["status"], "aborted");
}

TEST(SessionLoop, DisconnectStoresAbort) {
  TokenRegistry tokens;
  const auto token = tokens.issue();
  RecordStore store(fresh_log());
  ScriptedTransport transport({{start_message(token, 600).dump()}}, 10);
  LoopOptions opt;
  opt.realtime = false;
  const auto r = run_session(transport, store, tokens, opt);
  ASSERT_TRUE(r);
  EXPECT_FALSE(r->completed);
  EXPECT_LT(r->steps, 600);
  EXPECT_NE(r->mode_detail.find("failure=client disconnected"), std::string::npos);
  EXPECT_EQ(store.size(), 1u);
}

TEST(Gateway, LiveSessionOverTcp) {
  TokenRegistry tokens;
  const auto token = tokens.issue();
  RecordStore store(fresh_log());
  SessionGateway gateway(store, tokens);
  const int port = gateway.start("127.0.0.1", 0);

  SessionClient client("127.0.0.1", port);
  client.send(start_message(token, 45, "obs=mean"));
  const auto hello = client.receive();
  ASSERT_TRUE(hello);
  EXPECT_EQ((*hello)["type"], "hello");
  EXPECT_EQ((*hello)["config"]["mode"], "obs=mean");

  // Event-to-frame latency: the next frame after a key press arrives well
  // within 100 ms at 30 frames per second.
  client.send(to_json(InputEvent{EventType::kKeyDown, "right", {}, 1}));
  const auto sent_at = std::chrono::steady_clock::now();
  const auto first = client.receive();
  const auto latency = std::chrono::steady_clock::now() - sent_at;
  ASSERT_TRUE(first);
  EXPECT_EQ((*first)["type"], "frame");
  EXPECT_LT(latency, std::chrono::milliseconds(100));
  EXPECT_EQ((*first)["observation"]["data"].size(), 2u);

  json last;
  long previous_step = (*first)["step"];
  while (auto m = client.receive()) {
    last = *m;
    if (last["type"] == "end") break;
    EXPECT_GT(last["step"].get<long>(), previous_step);
    previous_step = last["step"];
  }
  ASSERT_EQ(last["type"], "end");
  EXPECT_EQ(last["record"]["steps"], 45);
  EXPECT_EQ(store.size(), 1u);
  gateway.stop();
}

TEST(Gateway, ClientHangupStoresAbort) {
  TokenRegistry tokens;
  const auto token = tokens.issue();
  RecordStore store(fresh_log());
  SessionGateway gateway(store, tokens);
  const int port = gateway.start("127.0.0.1", 0);
  {
    SessionClient client("127.0.0.1", port);
    client.send(start_message(token, 18000));
    ASSERT_TRUE(client.receive());
    ASSERT_TRUE(client.receive());
  }
  for (int i = 0; i < 200 && store.size() == 0; ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
  ASSERT_EQ(store.size(), 1u);
  EXPECT_FALSE(store.records()[0].completed);
  gateway.stop();
}
