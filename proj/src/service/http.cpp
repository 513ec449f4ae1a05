#include "swarm/service/http.hpp"

#include <httplib.h>

#include <thread>

#include "swarm/error.hpp"
#include "swarm/harness/stats.hpp"

namespace swarm::service {

using nlohmann::json;

namespace {

RecordFilter filter_from(const httplib::Request& req) {
  RecordFilter f;
  if (req.has_param("experiment")) f.experiment = req.get_param_value("experiment");
  if (req.has_param("participant")) f.participant = req.get_param_value("participant");
  if (req.has_param("mode")) f.mode = req.get_param_value("mode");
  return f;
}

void reply_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

}  // namespace

struct ResultsServer::Impl {
  RecordStore& store;
  TokenRegistry& tokens;
  httplib::Server server;
  std::thread thread;

  Impl(RecordStore& s, TokenRegistry& t) : store(s), tokens(t) {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});

    server.Post("/token", [this](const httplib::Request&, httplib::Response& res) {
      reply_json(res, 201, {{"token", tokens.issue()}});
    });

    server.Post("/results", [this](const httplib::Request& req, httplib::Response& res) {
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::parse_error& e) {
        reply_json(res, 400, {{"error", std::string("malformed JSON: ") + e.what()}});
        return;
      }
      try {
        const auto result = store.store_json(body);
        if (result.inserted) reply_json(res, 201, {{"id", result.id}});
        else reply_json(res, 200, {{"id", result.id}, {"duplicate", true}});
      } catch (const ConfigError& e) {
        reply_json(res, 400, {{"error", e.what()}});
      }
    });

    server.Get("/results.json", [this](const httplib::Request& req, httplib::Response& res) {
      res.set_content(export_json(store.records(filter_from(req))), "application/json");
    });

    server.Get("/results.csv", [this](const httplib::Request& req, httplib::Response& res) {
      res.set_content(harness::to_csv(store.records(filter_from(req))), "text/csv");
    });

    server.Get("/stats", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        const auto key = harness::group_key_from_string(
            req.has_param("group_by") ? req.get_param_value("group_by") : "mode");
        RecordFilter f;
        if (req.has_param("experiment")) f.experiment = req.get_param_value("experiment");
        const auto records = store.records(f);
        if (records.empty()) {
          reply_json(res, 200, json::array());
          return;
        }
        reply_json(res, 200, harness::stats_json(harness::aggregate_stats(records, key)));
      } catch (const ConfigError& e) {
        reply_json(res, 400, {{"error", e.what()}});
      }
    });
  }
};

ResultsServer::ResultsServer(RecordStore& store, TokenRegistry& tokens)
    : impl_(std::make_unique<Impl>(store, tokens)) {}

ResultsServer::~ResultsServer() { stop(); }

int ResultsServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void ResultsServer::stop() {
  if (!impl_ || !impl_->thread.joinable()) return;
  impl_->server.stop();
  impl_->thread.join();
}

}  // namespace swarm::service
