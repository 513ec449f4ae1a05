#pragma once

#include <atomic>
#include <chrono>
#include <list>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include <json.hpp>

#include "swarm/service/session.hpp"

namespace swarm::service {

// TCP listener for live sessions: one thread and one Session per connection.
class SessionGateway {
 public:
  SessionGateway(RecordStore& store, const TokenRegistry& tokens, LoopOptions options = {});
  ~SessionGateway();
  SessionGateway(const SessionGateway&) = delete;
  SessionGateway& operator=(const SessionGateway&) = delete;

  // Binds and starts accepting in the background. Port 0 picks a free port;
  // the bound port is returned. Throws std::runtime_error on socket errors.
  int start(const std::string& host, int port);
  void stop();

 private:
  void accept_loop();

  RecordStore& store_;
  const TokenRegistry& tokens_;
  LoopOptions options_;
  int listen_fd_ = -1;
  std::atomic<bool> running_{false};
  std::thread acceptor_;
  std::mutex workers_mutex_;
  std::list<std::thread> workers_;
};

// Blocking client side of the session protocol.
class SessionClient {
 public:
  SessionClient(const std::string& host, int port);
  ~SessionClient();
  SessionClient(const SessionClient&) = delete;
  SessionClient& operator=(const SessionClient&) = delete;

  void send(const nlohmann::json& message);
  // Next message, or nothing on timeout or when the server closed.
  std::optional<nlohmann::json> receive(std::chrono::milliseconds timeout = std::chrono::seconds(10));
  void close();

 private:
  int fd_ = -1;
  MessageReader reader_;
};

}  // namespace swarm::service
