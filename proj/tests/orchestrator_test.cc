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

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "ssreg/orchestrator.h"
#include "ssreg/run_spec.h"
#include "ssreg/runner.h"
#include "test_util.h"

namespace ssreg {
namespace {

using testing::CodeOf;
namespace fs = std::filesystem;

fs::path Scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ssreg_orch_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunSpec Spec(Task task, Scheme scheme, SmmVariant smm, std::size_t parties) {
  RunSpec s;
  s.task = task;
  s.training.task = task;
  s.scheme = scheme;
  s.training.smm = smm;
  s.parties = parties;
  s.training.iterations = 40;
  s.training.learning_rate = 0.1;
  s.dataset.synthetic = task == Task::kLinear ? "linear" : "separable";
  s.dataset.rows = 90;
  s.dataset.cols = 4;
  s.folds = 2;
  return s;
}

SpawnOptions Options(const fs::path& dir) {
  SpawnOptions o;
  o.cli = SSREG_CLI_PATH;
  o.work_dir = dir;
  return o;
}

TEST(Spawn, ProcessModeMatchesThreadModeThreeParties) {
  for (const RunSpec& spec : {Spec(Task::kLinear, Scheme::kHorizontal, SmmVariant::kTrustedInitializer, 3),
                              Spec(Task::kLogistic, Scheme::kVertical, SmmVariant::kNoInitializer, 3)}) {
    const RunResult threads = SpawnParties(spec, ExecutionMode::kThreads, {});
    const RunResult procs = SpawnParties(spec, ExecutionMode::kProcesses, Options(Scratch("match")));
    EXPECT_EQ(threads.manifest.dump(), procs.manifest.dump()) << spec.ConfigName();
  }
}

TEST(Spawn, KilledPartyIsReported) {
  RunSpec spec = Spec(Task::kLinear, Scheme::kHorizontal, SmmVariant::kNoInitializer, 2);
  spec.training.iterations = 2000000;
  spec.folds = 2;
  SpawnOptions o = Options(Scratch("kill"));
  o.kill_party = 1;
  o.kill_after = std::chrono::milliseconds(500);
  try {
    SpawnParties(spec, ExecutionMode::kProcesses, o);
    FAIL() << "expected PartyCrashed";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPartyCrashed);
    EXPECT_NE(std::string(e.what()).find("party 1 killed by signal 9"), std::string::npos) << e.what();
  }
}

TEST(Spawn, ThreadModeRejectsPlaintext) {
  RunSpec spec = Spec(Task::kLinear, Scheme::kHorizontal, SmmVariant::kNoInitializer, 2);
  spec.secure = false;
  EXPECT_EQ(CodeOf([&] { SpawnParties(spec, ExecutionMode::kThreads, {}); }), ErrorCode::kConfigError);
}

int RunCli(const std::string& args) {
  const std::string cmd = std::string(SSREG_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  const fs::path dir = Scratch("cli");
  RunSpec spec = Spec(Task::kLinear, Scheme::kHorizontal, SmmVariant::kTrustedInitializer, 2);
  SaveRunSpec(dir / "ok.json", spec);
  EXPECT_EQ(RunCli("train --spec " + (dir / "ok.json").string() + " --out " + (dir / "out").string() +
                   " --check-baseline"),
            0);
  EXPECT_TRUE(fs::exists(dir / "out" / "manifest.json"));
  EXPECT_TRUE(fs::exists(dir / "out" / "report.tsv"));
  EXPECT_EQ(RunCli("report " + (dir / "out" / "report.tsv").string()), 0);

  std::ofstream(dir / "bad.json") << "{\"task\": \"SVM\"}";
  EXPECT_EQ(RunCli("train --spec " + (dir / "bad.json").string()), 2);
  EXPECT_EQ(RunCli("train --spec " + (dir / "missing.json").string()), 2);
  EXPECT_EQ(RunCli("frobnicate"), 2);

  // Nobody listens on the roster: the lone party times out connecting.
  RunSpec lonely = spec;
  lonely.training.smm = SmmVariant::kNoInitializer;
  lonely.timeout = std::chrono::milliseconds(300);
  const auto ports = PickFreePorts(2);
  lonely.roster = {{0, "127.0.0.1", ports[0]}, {1, "127.0.0.1", ports[1]}};
  SaveRunSpec(dir / "lonely.json", lonely);
  EXPECT_EQ(RunCli("train --spec " + (dir / "lonely.json").string() + " --party 1 --record " +
                   (dir / "r.json").string()),
            3);

  // Six fractional bits are far too coarse to track the plaintext run.
  RunSpec coarse = spec;
  coarse.training.fixed_point.fractional_bits = 6;
  SaveRunSpec(dir / "coarse.json", coarse);
  EXPECT_EQ(RunCli("train --spec " + (dir / "coarse.json").string() + " --out " + (dir / "c").string() +
                   " --check-baseline"),
            4);
}

PartyRecord LoadRecord(const fs::path& p) {
  std::ifstream f(p);
  return PartyRecord::FromJson(nlohmann::json::parse(f));
}

// Each party process may carry its own secret seed; the spec hash ignores it.
TEST(Cli, PerPartyPrivateSeeds) {
  const fs::path dir = Scratch("seeds");
  RunSpec spec = Spec(Task::kLinear, Scheme::kVertical, SmmVariant::kNoInitializer, 2);
  spec.timeout = std::chrono::milliseconds(20000);
  auto run = [&](const std::string& tag, const std::string& seed0, const std::string& seed1) {
    const auto ports = PickFreePorts(2);
    spec.roster = {{0, "127.0.0.1", ports[0]}, {1, "127.0.0.1", ports[1]}};
    SaveRunSpec(dir / (tag + ".json"), spec);
    const std::string base = std::string(SSREG_CLI_PATH) + " train --spec " + (dir / (tag + ".json")).string();
    const std::string cmd = base + " --party 0 --record " + (dir / (tag + "_0.json")).string() + seed0 +
                            " & " + base + " --party 1 --record " + (dir / (tag + "_1.json")).string() +
                            seed1 + "; s1=$?; wait $! ; s0=$?; exit $((s0 + s1))";
    const int status = std::system(("sh -c '" + cmd + "' > /dev/null 2>&1").c_str());
    EXPECT_TRUE(WIFEXITED(status) && WEXITSTATUS(status) == 0) << tag;
    return std::pair{LoadRecord(dir / (tag + "_0.json")), LoadRecord(dir / (tag + "_1.json"))};
  };
  const auto [a0, a1] = run("public", "", "");
  const auto [b0, b1] = run("secret", " --private-seed 1234", " --private-seed 98765");
  EXPECT_EQ(b0.spec_hash, a0.spec_hash);
  EXPECT_NE(b0.transcript_digest, a0.transcript_digest);
  EXPECT_NE(b1.transcript_digest, a1.transcript_digest);
  ASSERT_EQ(b0.folds.size(), a0.folds.size());
  const double ulp = std::ldexp(1.0, -20);
  for (std::size_t f = 0; f < a0.folds.size(); ++f) {
    EXPECT_EQ(b0.folds[f].model_digest, b1.folds[f].model_digest);
    ASSERT_EQ(a0.folds[f].model.size(), b0.folds[f].model.size());
    for (std::size_t k = 0; k < a0.folds[f].model.size(); ++k) {
      const double wa = Decode(RingElement{a0.folds[f].model[k]}, {});
      const double wb = Decode(RingElement{b0.folds[f].model[k]}, {});
      EXPECT_NEAR(wa, wb, 64 * ulp);
    }
  }
}

TEST(Cli, TriplegenAndPartition) {
  const fs::path dir = Scratch("tg");
  EXPECT_EQ(RunCli("triplegen --dims 5,5,1 --count 3 --seed 4 --out " + (dir / "t.trpl").string()), 0);
  const auto ts = ReadTripleFile(dir / "t.trpl");
  ASSERT_EQ(ts.size(), 3u);
  for (const auto& t : ts) EXPECT_EQ(MatMulRaw(t.U(), t.V()), t.W());
  EXPECT_EQ(RunCli("triplegen --dims 5,0,1 --out " + (dir / "bad.trpl").string()), 2);

  RunSpec spec = Spec(Task::kLinear, Scheme::kVertical, SmmVariant::kTrustedInitializer, 2);
  spec.dataset.split_ratios = {3, 1};
  SaveRunSpec(dir / "v.json", spec);
  EXPECT_EQ(RunCli("partition --spec " + (dir / "v.json").string() + " --out " + (dir / "parts").string()), 0);
  std::ifstream f0(dir / "parts" / "party_0.csv"), f1(dir / "parts" / "party_1.csv");
  std::string h0, h1;
  std::getline(f0, h0);
  std::getline(f1, h1);
  EXPECT_EQ(h0, "x0,x1,x2,y");
  EXPECT_EQ(h1, "x3");
  EXPECT_EQ(RunCli("triplegen --spec " + (dir / "v.json").string() + " --out " + (dir / "pairs").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "pairs" / "pair_0_1.trpl"));
  EXPECT_TRUE(fs::exists(dir / "pairs" / "pair_1_0.trpl"));
}

}  // namespace
}  // namespace ssreg
