#pragma once

#include <memory>
#include <string>

#include "swarm/service/store.hpp"

namespace swarm::service {

// Results API:
//   POST /token          -> 201 {"token": "..."}
//   POST /results        -> 201 {"id": N}, 200 with "duplicate": true for a
//                           record already stored, 400 naming the bad field
//   GET  /results.json   -> array of records; ?experiment=&participant=&mode=
//   GET  /results.csv    -> same filters, CSV with a header row
//   GET  /stats          -> ?experiment=&group_by=mode, aggregate table as JSON
class ResultsServer {
 public:
  ResultsServer(RecordStore& store, TokenRegistry& tokens);
  ~ResultsServer();
  ResultsServer(const ResultsServer&) = delete;
  ResultsServer& operator=(const ResultsServer&) = delete;

  // Binds and serves in a background thread; port 0 picks a free port.
  // Returns the bound port. Throws std::runtime_error if binding fails.
  int start(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace swarm::service
