#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "swarm/error.hpp"
#include "swarm/harness/batch.hpp"
#include "swarm/harness/stats.hpp"
#include "swarm/service/gateway.hpp"
#include "swarm/service/http.hpp"

using namespace swarm;
using nlohmann::json;

namespace {

volatile std::sig_atomic_t g_stop = 0;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// .csv -> CSV with header, .jsonl -> one record per line, anything else a JSON array.
std::string format_records(const std::vector<harness::TrialRecord>& records, const std::string& path) {
  if (ends_with(path, ".csv")) return harness::to_csv(records);
  if (ends_with(path, ".jsonl")) {
    std::string out;
    for (const auto& r : records) out += harness::to_json(r).dump() + "\n";
    return out;
  }
  json arr = json::array();
  for (const auto& r : records) arr.push_back(harness::to_json(r));
  return arr.dump(2) + "\n";
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw ConfigError("cannot write " + path);
}

// Accepts CSV exports, JSON arrays, record-per-line JSON and the store log.
std::vector<harness::TrialRecord> load_records(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  if (text[first] == '[') return service::import_json(text);
  if (text[first] == '{') {
    std::vector<harness::TrialRecord> out;
    std::istringstream in(text);
    long line_no = 0;
    for (std::string line; std::getline(in, line);) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        const json j = json::parse(line);
        out.push_back(harness::record_from_json(j.contains("record") ? j["record"] : j));
      } catch (const std::exception& e) {
        throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    return out;
  }
  return harness::records_from_csv(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Swarm experiment runner: headless trials, batches, statistics and the results service"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run one headless trial");
  std::string task, mode = "random", controller = "auto", run_out, participant = "headless";
  std::uint64_t seed = 0;
  int max_steps = 18000;
  run->add_option("--task", task, "vary_number, vary_control, vary_visualization, vary_noise, position_control")
      ->required();
  run->add_option("--mode", mode, "Mode label such as n=100 or noise=1.5, or random")->capture_default_str();
  run->add_option("--seed", seed, "Trial seed")->capture_default_str();
  run->add_option("--controller", controller, "noop, push, position or auto")->capture_default_str();
  run->add_option("--max-steps", max_steps, "Step limit")->capture_default_str()->check(CLI::PositiveNumber);
  run->add_option("--participant", participant, "Participant id for the record")->capture_default_str();
  run->add_option("--out", run_out, "Output file (.csv, .jsonl or JSON); stdout if omitted");

  // batch
  auto* batch = app.add_subcommand("batch", "Run a batch of trials from a JSON config");
  std::string batch_config, batch_out;
  int parallelism = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  batch->add_option("--config", batch_config, "Batch config file")->required();
  batch->add_option("--parallelism", parallelism, "Worker threads")->check(CLI::PositiveNumber);
  batch->add_option("--out", batch_out, "Output file (.csv, .jsonl or JSON); stdout if omitted");

  // stats
  auto* stats = app.add_subcommand("stats", "Summarize records");
  std::string stats_in, group_by = "mode", format = "table";
  stats->add_option("--in", stats_in, "Records: CSV export, JSON array, JSON lines or store log")->required();
  stats->add_option("--group-by", group_by, "experiment, mode, num_robots, agent or participant")
      ->capture_default_str();
  stats->add_option("--format", format, "csv, table or json")
      ->check(CLI::IsMember({"csv", "table", "json"}))
      ->capture_default_str();

  // serve
  auto* serve = app.add_subcommand("serve", "Serve the results API and live sessions");
  std::string host = "127.0.0.1", data_dir = "swarm-data";
  int http_port = 8080, session_port = 8081;
  serve->add_option("--host", host, "Listen address")->capture_default_str();
  serve->add_option("--port", http_port, "HTTP port")->capture_default_str();
  serve->add_option("--session-port", session_port, "Session stream port")->capture_default_str();
  serve->add_option("--data", data_dir, "Directory for the record log and tokens")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) {
      harness::TrialConfig c;
      c.kind = tasks::task_kind_from_string(task);
      if (mode != "random") c.mode = tasks::parse_mode(c.kind, mode);
      c.seed = seed;
      c.max_steps = max_steps;
      c.controller_id = controller;
      c.participant_id = participant;
      // Surface unknown controllers as configuration errors, not failure records.
      harness::make_controller(controller, c.kind, CounterRng(0));
      const auto record = harness::run_trial(c);
      write_output(run_out.empty() ? harness::to_json(record).dump(2) + "\n"
                                   : format_records({record}, run_out),
                   run_out);
    } else if (*batch) {
      const auto configs = harness::configs_from_text(read_file(batch_config));
      for (const auto& c : configs) harness::make_controller(c.controller_id, c.kind, CounterRng(0));
      const auto records = harness::run_batch(configs, parallelism);
      write_output(format_records(records, batch_out), batch_out);
    } else if (*stats) {
      const auto key = harness::group_key_from_string(group_by);
      const auto records = load_records(stats_in);
      const auto rows = harness::aggregate_stats(records, key);
      if (format == "csv") std::cout << harness::stats_csv(rows);
      else if (format == "json") std::cout << harness::stats_json(rows).dump(2) << "\n";
      else std::cout << harness::stats_table(rows);
    } else if (*serve) {
      service::RecordStore store(std::filesystem::path(data_dir) / "records.jsonl");
      service::TokenRegistry tokens(std::filesystem::path(data_dir) / "tokens.txt");
      service::ResultsServer http(store, tokens);
      service::SessionGateway gateway(store, tokens);
      const int hp = http.start(host, http_port);
      const int sp = gateway.start(host, session_port);
      std::cerr << "results on http://" << host << ":" << hp << ", sessions on " << host << ":" << sp
                << ", " << store.size() << " records loaded\n";
      std::signal(SIGINT, [](int) { g_stop = 1; });
      std::signal(SIGTERM, [](int) { g_stop = 1; });
      while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      gateway.stop();
      http.stop();
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
