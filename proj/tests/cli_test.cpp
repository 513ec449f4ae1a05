#include <gtest/gtest.h>

#include <httplib.h>
#include <netinet/in.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "swarm/harness/record.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int status = -1;
  std::string out;
};

Result sh(const std::string& args) {
  const std::string cmd = std::string(SWARMCTL_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = ::pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path temp_dir() {
  auto d = fs::temp_directory_path() / ("swarm_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

int free_port() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

}  // namespace

TEST(Cli, RunPrintsARecord) {
  const auto r = sh("run --task vary_visualization --mode obs=full_state --seed 2 --controller push --max-steps 4000");
  ASSERT_EQ(r.status, 0);
  const auto rec = swarm::harness::record_from_json(json::parse(r.out));
  EXPECT_TRUE(rec.completed);
  EXPECT_EQ(rec.seed, 2u);
  EXPECT_EQ(rec.experiment_name, "vary_visualization");
}

TEST(Cli, ConfigErrorsExitNonzero) {
  EXPECT_NE(sh("run --task juggling").status, 0);
  EXPECT_NE(sh("run --task vary_noise --mode noise=9").status, 0);
  EXPECT_NE(sh("run --task vary_noise --controller warp").status, 0);
  EXPECT_NE(sh("run --task vary_noise --max-steps 0").status, 0);
  EXPECT_NE(sh("batch --config /nonexistent.json").status, 0);
  EXPECT_NE(sh("stats --in /nonexistent.csv").status, 0);
  EXPECT_NE(sh("").status, 0);
}

TEST(Cli, BatchThenStats) {
  const auto dir = temp_dir();
  {
    std::ofstream cfg(dir / "batch.json");
    cfg << R"({"trials": [{"task": "vary_noise", "modes": ["noise=0", "noise=2"], "seeds": [0, 3],
               "controller": "push", "max_steps": 4000}]})";
  }
  const auto csv = (dir / "out.csv").string();
  auto r = sh("batch --config " + (dir / "batch.json").string() + " --parallelism 2 --out " + csv);
  ASSERT_EQ(r.status, 0);
  std::ifstream in(csv);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto records = swarm::harness::records_from_csv(text);
  ASSERT_EQ(records.size(), 6u);

  r = sh("stats --in " + csv + " --group-by mode --format csv");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "group,count,completed,min,q1,median,q3,max,completion_rate");
  EXPECT_NE(r.out.find("vary_noise/noise=0,3,"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("vary_noise/noise=2,3,"), std::string::npos) << r.out;

  r = sh("stats --in " + csv + " --group-by mode --format table");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("median"), std::string::npos);
  EXPECT_NE(sh("stats --in " + csv + " --group-by colour").status, 0);
}

TEST(Cli, ServeAnswersHttp) {
  const auto dir = temp_dir() / "serve";
  fs::remove_all(dir);
  const int port = free_port();
  const int session_port = free_port();
  const pid_t pid = ::fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    const std::string p = std::to_string(port), sp = std::to_string(session_port), d = dir.string();
    ::execl(SWARMCTL_PATH, SWARMCTL_PATH, "serve", "--port", p.c_str(), "--session-port", sp.c_str(),
            "--data", d.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  httplib::Client client("127.0.0.1", port);
  httplib::Result res;
  for (int i = 0; i < 100 && !res; ++i) {
    ::usleep(50000);
    res = client.Post("/token");
  }
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201);
  res = client.Get("/results.csv");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->body, "experiment,participant,duration,num_robots,mode,agent,seed,completed,steps,scenario_digest\n");
  ::kill(pid, SIGTERM);
  int st = 0;
  ::waitpid(pid, &st, 0);
  EXPECT_TRUE(WIFEXITED(st));
  EXPECT_EQ(WEXITSTATUS(st), 0);
}
