/*
 * Copyright 2026 The ssreg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ssreg/orchestrator.h"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include "ssreg/error.h"
#include "ssreg/prg.h"

namespace ssreg {
namespace {

using Clock = std::chrono::steady_clock;

std::string LastLines(const std::filesystem::path& path, std::size_t count) {
  std::ifstream f(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(f, line)) lines.push_back(line);
  std::string out;
  const std::size_t from = lines.size() > count ? lines.size() - count : 0;
  for (std::size_t i = from; i < lines.size(); ++i) out += lines[i] + "\n";
  return out;
}

pid_t Launch(const std::filesystem::path& cli,
             const std::vector<std::string>& args,
             const std::filesystem::path& log) {
  std::vector<char*> argv;
  std::string program = cli.string();
  argv.push_back(program.data());
  std::vector<std::string> copy = args;
  for (auto& a : copy) argv.push_back(a.data());
  argv.push_back(nullptr);
  const pid_t pid = fork();
  SSREG_ENFORCE(pid >= 0, ErrorCode::kIoError, "fork failed");
  if (pid == 0) {
    const int fd = open(log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd >= 0) {
      dup2(fd, STDOUT_FILENO);
      dup2(fd, STDERR_FILENO);
      close(fd);
    }
    execv(program.c_str(), argv.data());
    _exit(127);
  }
  return pid;
}

std::string DescribeStatus(int status) {
  if (WIFEXITED(status)) return "exited with status " + std::to_string(WEXITSTATUS(status));
  if (WIFSIGNALED(status)) return "killed by signal " + std::to_string(WTERMSIG(status));
  return "stopped";
}

std::vector<PartyRecord> RunChildren(const RunSpec& resolved,
                                     const std::filesystem::path& spec_path,
                                     const SpawnOptions& options) {
  const std::size_t n = resolved.parties;
  std::vector<pid_t> pids(n, -1);
  std::vector<std::filesystem::path> logs(n);
  std::vector<std::filesystem::path> record_paths(n);
  for (PartyId p = 0; p < n; ++p) {
    logs[p] = options.work_dir / ("party_" + std::to_string(p) + ".log");
    record_paths[p] = options.work_dir / ("party_" + std::to_string(p) + ".json");
    std::filesystem::remove(record_paths[p]);
    pids[p] = Launch(options.cli,
                     {"train", "--spec", spec_path.string(), "--party",
                      std::to_string(p), "--record", record_paths[p].string()},
                     logs[p]);
  }

  const auto start = Clock::now();
  std::vector<int> status(n, 0);
  std::vector<bool> done(n, false);
  std::size_t remaining = n;
  bool killed = false;
  std::optional<Clock::time_point> first_failure;
  while (remaining > 0) {
    for (PartyId p = 0; p < n; ++p) {
      if (done[p]) continue;
      int st = 0;
      if (waitpid(pids[p], &st, WNOHANG) == pids[p]) {
        done[p] = true;
        status[p] = st;
        --remaining;
        const bool ok = WIFEXITED(st) && WEXITSTATUS(st) == 0;
        if (!ok && !first_failure) first_failure = Clock::now();
      }
    }
    const auto now = Clock::now();
    if (options.kill_party && !killed && now - start >= options.kill_after) {
      const PartyId k = *options.kill_party;
      if (k < n && !done[k]) kill(pids[k], SIGKILL);
      killed = true;
    }
    // Survivors of a crash normally fail fast on the closed channel; make
    // sure nobody outlives the grace period.
    if (first_failure && now - *first_failure > std::chrono::seconds(10)) {
      for (PartyId p = 0; p < n; ++p)
        if (!done[p]) kill(pids[p], SIGKILL);
    }
    if (remaining > 0) std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }

  std::ostringstream failures;
  bool failed = false;
  for (PartyId p = 0; p < n; ++p) {
    if (WIFEXITED(status[p]) && WEXITSTATUS(status[p]) == 0) continue;
    failed = true;
    failures << "party " << p << " " << DescribeStatus(status[p]) << "; log tail:\n"
             << LastLines(logs[p], 5);
  }
  SSREG_ENFORCE(!failed, ErrorCode::kPartyCrashed, failures.str());

  std::vector<PartyRecord> records;
  for (PartyId p = 0; p < n; ++p) {
    std::ifstream f(record_paths[p]);
    SSREG_ENFORCE(f.good(), ErrorCode::kPartyCrashed,
                  "party " + std::to_string(p) + " left no record");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kPartyCrashed,
                  "party " + std::to_string(p) + " record: " + e.what());
    }
    records.push_back(PartyRecord::FromJson(j));
  }
  return records;
}

}  // namespace

std::vector<std::uint16_t> PickFreePorts(std::size_t n) {
  std::vector<int> fds;
  std::vector<std::uint16_t> ports;
  for (std::size_t i = 0; i < n; ++i) {
    const int fd = socket(AF_INET, SOCK_STREAM, 0);
    SSREG_ENFORCE(fd >= 0, ErrorCode::kTransportError, "socket failed");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    socklen_t len = sizeof(addr);
    if (bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
        getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
      close(fd);
      throw Error(ErrorCode::kTransportError, "cannot reserve a port");
    }
    fds.push_back(fd);
    ports.push_back(ntohs(addr.sin_port));
  }
  for (int fd : fds) close(fd);
  return ports;
}

double WriteRunTriples(const RunSpec& spec, const PreparedRun& prep,
                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  TrustedInitializer dealer(DeriveSeed(spec.training.seed, "dealer"));
  const auto per_pair = dealer.Export(RunTriplePlan(spec, prep));
  for (const auto& [pair, triples] : per_pair)
    WriteTripleFile(PairTripleFile(dir, pair.first, pair.second), triples);
  return dealer.generation_seconds();
}

PartyRecord RunPartyProcess(const RunSpec& spec, PartyId party) {
  SSREG_ENFORCE(spec.secure, ErrorCode::kConfigError,
                "plaintext specs have no parties");
  SSREG_ENFORCE(party < spec.parties, ErrorCode::kConfigError,
                "party " + std::to_string(party) + " is not in the spec");
  SSREG_ENFORCE(spec.roster.size() == spec.parties, ErrorCode::kConfigError,
                "process runs need a roster");
  const PreparedRun prep = PrepareRun(spec);
  TriplePool pool(party);
  if (spec.training.smm == SmmVariant::kTrustedInitializer) {
    SSREG_ENFORCE(!spec.triple_dir.empty(), ErrorCode::kConfigError,
                  "process runs with SMM-I need triples.dir");
    pool.LoadDirectory(spec.triple_dir, spec.parties);
  }
  TcpOptions tcp;
  tcp.connect_timeout = spec.timeout;
  SessionOptions options;
  options.timeout = spec.timeout;
  Session session(ConnectTcp(spec.roster, party, tcp), options);
  PartyRecord record = RunPartyFolds(session, spec, prep, &pool);
  session.Close();
  return record;
}

RunResult SpawnParties(const RunSpec& spec, ExecutionMode mode,
                       const SpawnOptions& options) {
  SSREG_ENFORCE(spec.secure, ErrorCode::kConfigError,
                "only secure specs have parties to spawn");
  if (mode == ExecutionMode::kThreads) return RunSpecInThreads(spec);

  SSREG_ENFORCE(!options.cli.empty() && !options.work_dir.empty(),
                ErrorCode::kConfigError,
                "process mode needs the executable and a work directory");
  std::filesystem::create_directories(options.work_dir);
  const PreparedRun prep = PrepareRun(spec);
  RunSpec resolved = spec;
  if (resolved.roster.empty()) {
    const auto ports = PickFreePorts(spec.parties);
    for (PartyId p = 0; p < spec.parties; ++p)
      resolved.roster.push_back({p, "127.0.0.1", ports[p]});
  }
  double triple_seconds = 0;
  if (spec.training.smm == SmmVariant::kTrustedInitializer) {
    resolved.triple_dir = (options.work_dir / "triples").string();
    resolved.triple_mode = spec.triple_mode;
    triple_seconds = WriteRunTriples(resolved, prep, resolved.triple_dir);
  }
  const auto spec_path = options.work_dir / "spec.json";
  SaveRunSpec(spec_path, resolved);
  const auto records = RunChildren(resolved, spec_path, options);
  return AssembleSecureRun(resolved, prep, records, triple_seconds);
}

}  // namespace ssreg
