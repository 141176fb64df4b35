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

// ssreg: command-line front end for secure regression training.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssreg/error.h"
#include "ssreg/orchestrator.h"
#include "ssreg/prg.h"
#include "ssreg/run_spec.h"
#include "ssreg/runner.h"
#include "ssreg/smm.h"

namespace fs = std::filesystem;
using namespace ssreg;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitProtocol = 3;
constexpr int kExitEquivalence = 4;

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigError:
    case ErrorCode::kParseError:
    case ErrorCode::kMissingLabelColumn:
    case ErrorCode::kIoError:
    case ErrorCode::kTooFewRows:
    case ErrorCode::kTooFewColumns:
    case ErrorCode::kTooFewSamples:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidPartyCount:
    case ErrorCode::kLabelDomainError:
    case ErrorCode::kBatchTooLarge:
      return kExitConfig;
    default:
      return kExitProtocol;
  }
}

MatMulDims ParseDims(const std::string& text) {
  std::vector<std::size_t> v;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      v.push_back(std::stoul(part));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kConfigError, "bad --dims '" + text + "'");
    }
  }
  SSREG_ENFORCE(v.size() == 3 && v[0] && v[1] && v[2], ErrorCode::kConfigError,
                "--dims expects x,y,z with positive entries");
  return {v[0], v[1], v[2]};
}

struct TriplegenArgs {
  std::string dims, spec, out;
  std::size_t count = 1;
  std::uint64_t seed = 1;
};

int Triplegen(const TriplegenArgs& a) {
  if (!a.spec.empty()) {
    const RunSpec spec = LoadRunSpec(a.spec);
    SSREG_ENFORCE(spec.secure && spec.training.smm == SmmVariant::kTrustedInitializer,
                  ErrorCode::kConfigError, "triplegen --spec needs a secure SMM-I spec");
    const PreparedRun prep = PrepareRun(spec);
    const double seconds = WriteRunTriples(spec, prep, a.out);
    std::cout << "wrote triples for " << spec.ConfigName() << " to " << a.out
              << " in " << seconds << " s\n";
    return 0;
  }
  SSREG_ENFORCE(!a.dims.empty(), ErrorCode::kConfigError,
                "triplegen needs --dims or --spec");
  const MatMulDims dims = ParseDims(a.dims);
  Prg prg(DeriveSeed(a.seed, "triplegen"));
  std::vector<BeaverTriple> triples;
  triples.reserve(a.count);
  for (std::size_t i = 0; i < a.count; ++i) triples.push_back(GenerateTriple(dims, prg));
  WriteTripleFile(a.out, triples);
  std::cout << "wrote " << a.count << " triples to " << a.out << "\n";
  return 0;
}

int PartitionCmd(const std::string& spec_path, const std::string& out) {
  const RunSpec spec = LoadRunSpec(spec_path);
  const Dataset data = LoadSpecDataset(spec);
  const PartitionedDataset parts =
      Partition(data, spec.scheme, spec.parties, spec.dataset.split_ratios,
                spec.training.label_owner);
  fs::create_directories(out);
  for (PartyId p = 0; p < parts.parties.size(); ++p) {
    Dataset slice;
    slice.x = parts.parties[p].x;
    slice.y = parts.parties[p].y;
    slice.label_name = data.label_name;
    const Slice& s = parts.slices[p];
    if (spec.scheme == Scheme::kVertical) {
      for (std::size_t c = s.begin; c < s.end && c < data.feature_names.size(); ++c)
        slice.feature_names.push_back(data.feature_names[c]);
    } else {
      slice.feature_names = data.feature_names;
    }
    const fs::path path = fs::path(out) / ("party_" + std::to_string(p) + ".csv");
    WriteCsv(path, slice);
    std::cout << path.string() << "\t" << slice.x.rows << "x" << slice.x.cols << "\n";
  }
  return 0;
}

struct TrainArgs {
  std::string spec, record, out;
  std::int64_t party = -1;
  std::optional<std::uint64_t> private_seed;
  bool processes = false;
  bool check = false;
  bool search_lr = false;
};

// Secure and plaintext counterparts must agree to 4 decimals.
int CheckAgainstBaseline(const RunSpec& spec, const EvalReport& secure) {
  RunSpec plain = spec;
  plain.secure = false;
  plain.plain_link = PlainTask::kLogisticPoly;
  const RunResult base = RunPlainSpec(plain, PrepareRun(plain));
  const bool ok = std::abs(secure.value - base.report.value) < 0.5e-4;
  std::cout << "equivalence " << (ok ? "ok" : "FAILED") << ": secure "
            << secure.value << " plaintext " << base.report.value << "\n";
  return ok ? 0 : kExitEquivalence;
}

int Train(const TrainArgs& a, const fs::path& self) {
  RunSpec spec = LoadRunSpec(a.spec);
  if (a.party >= 0) {
    SSREG_ENFORCE(!a.record.empty(), ErrorCode::kConfigError,
                  "--party needs --record");
    if (a.private_seed) spec.training.private_seed = *a.private_seed;
    const PartyRecord record = RunPartyProcess(spec, static_cast<PartyId>(a.party));
    std::ofstream f(a.record, std::ios::trunc);
    f << record.ToJson().dump(2) << "\n";
    SSREG_ENFORCE(f.good(), ErrorCode::kIoError, "cannot write " + a.record);
    return 0;
  }
  if (a.search_lr) {
    spec.training.learning_rate = SelectLearningRate(spec);
    std::cerr << "learning rate " << spec.training.learning_rate << "\n";
  }
  RunResult result;
  const fs::path out = !a.out.empty() ? fs::path(a.out)
                       : !spec.output.empty() ? fs::path(spec.output)
                                              : fs::path("out");
  if (!spec.secure) {
    result = RunPlainSpec(spec, PrepareRun(spec));
  } else {
    SpawnOptions options;
    options.cli = self;
    options.work_dir = out;
    result = SpawnParties(spec,
                          a.processes ? ExecutionMode::kProcesses : ExecutionMode::kThreads,
                          options);
  }
  WriteRunOutputs(result, out);
  std::cout << FormatTable({result.report});
  if (a.check && spec.secure) return CheckAgainstBaseline(spec, result.report);
  return 0;
}

struct BenchArgs {
  bool scaling = false;
  std::vector<std::size_t> sizes{500, 1000, 2000, 4000};
  std::size_t epochs = 50;
  std::size_t d = 8;
  std::string smm = "TI";
  std::vector<std::string> configs;
  std::string out;
};

int Bench(const BenchArgs& a) {
  std::ostringstream rows;
  if (a.scaling) {
    ScalingOptions options;
    options.sizes = a.sizes;
    options.epochs = a.epochs;
    options.d = a.d;
    options.smm = ParseSmmVariant(a.smm);
    const auto points = RunScaling(options);
    rows << "engine\tm\tsteps\tseconds\n";
    for (const auto& p : points)
      rows << p.engine << '\t' << p.m << '\t' << p.steps << '\t' << p.seconds << '\n';
    std::cout << rows.str();
    std::vector<std::string> engines;
    for (const auto& p : points)
      if (std::find(engines.begin(), engines.end(), p.engine) == engines.end())
        engines.push_back(p.engine);
    for (const auto& e : engines) {
      std::cout << e << " per-doubling ratios:";
      for (double r : DoublingRatios(points, e)) std::cout << ' ' << r;
      std::cout << '\n';
    }
  } else {
    SSREG_ENFORCE(a.configs.size() == 2, ErrorCode::kConfigError,
                  "bench needs --scaling or --configs LINEAR LOGISTIC");
    std::vector<EvalReport> reports;
    rows << EvalReport::TsvHeader() << '\n';
    for (const RunSpec& spec :
         StandardConfigurations(LoadRunSpec(a.configs[0]), LoadRunSpec(a.configs[1]))) {
      const RunResult r =
          spec.secure ? RunSpecInThreads(spec) : RunPlainSpec(spec, PrepareRun(spec));
      reports.push_back(r.report);
      rows << r.report.ToTsv() << '\n';
      std::cerr << spec.ConfigName() << " done\n";
    }
    std::cout << FormatTable(reports);
  }
  if (!a.out.empty()) {
    std::ofstream f(a.out, std::ios::trunc);
    f << rows.str();
    SSREG_ENFORCE(f.good(), ErrorCode::kIoError, "cannot write " + a.out);
  }
  return 0;
}

int Report(const std::vector<std::string>& inputs) {
  std::vector<EvalReport> reports;
  for (const auto& path : inputs) {
    std::ifstream f(path);
    SSREG_ENFORCE(f.good(), ErrorCode::kIoError, "cannot read " + path);
    std::string line;
    while (std::getline(f, line)) {
      if (line.empty() || line == EvalReport::TsvHeader()) continue;
      reports.push_back(EvalReport::FromTsv(line));
    }
  }
  std::cout << FormatTable(reports);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure multi-party linear and logistic regression"};
  app.require_subcommand(1);

  TriplegenArgs tg;
  auto* triplegen = app.add_subcommand("triplegen", "Generate Beaver triples");
  triplegen->add_option("--dims", tg.dims, "x,y,z for an x-by-y times y-by-z product");
  triplegen->add_option("--count", tg.count, "Number of triples");
  triplegen->add_option("--seed", tg.seed, "Generator seed");
  triplegen->add_option("--spec", tg.spec, "Generate every pair file a spec needs");
  triplegen->add_option("--out", tg.out, "Output file (or directory with --spec)")->required();

  std::string part_spec, part_out;
  auto* partition = app.add_subcommand("partition", "Split a dataset into party CSVs");
  partition->add_option("--spec", part_spec, "Run spec JSON")->required();
  partition->add_option("--out", part_out, "Directory for party_<p>.csv")->required();

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Run a spec, or one party of it");
  train->add_option("--spec", tr.spec, "Run spec JSON")->required();
  train->add_option("--party", tr.party, "Run only this party over TCP");
  train->add_option("--record", tr.record, "Party record output (with --party)");
  train->add_option("--private-seed", tr.private_seed, "This party's secret seed (with --party)");
  train->add_option("--out", tr.out, "Output directory");
  train->add_flag("--search-lr", tr.search_lr,
                 "Pick the learning rate from 0.001, 0.01, 0.1 on plaintext runs first");
  train->add_flag("--processes", tr.processes, "One child process per party over TCP");
  train->add_flag("--check-baseline", tr.check,
                  "Exit 4 unless the plaintext run matches to 4 decimals");

  BenchArgs bn;
  auto* bench = app.add_subcommand("bench", "Scaling sweep or the configuration table");
  bench->add_flag("--scaling", bn.scaling, "Time the secure engines over growing m");
  bench->add_option("--sizes", bn.sizes, "Row counts, comma separated")->delimiter(',');
  bench->add_option("--epochs", bn.epochs, "Epochs per run");
  bench->add_option("--features", bn.d, "Feature count");
  bench->add_option("--smm", bn.smm, "TI or OTI");
  bench->add_option("--configs", bn.configs, "Linear and logistic base specs")->expected(2);
  bench->add_option("--out", bn.out, "Write rows as TSV");

  std::vector<std::string> report_inputs;
  auto* report = app.add_subcommand("report", "Print report.tsv files as a table");
  report->add_option("inputs", report_inputs, "report.tsv files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*triplegen) return Triplegen(tg);
    if (*partition) return PartitionCmd(part_spec, part_out);
    if (*train) return Train(tr, fs::canonical("/proc/self/exe"));
    if (*bench) return Bench(bn);
    if (*report) return Report(report_inputs);
  } catch (const Error& e) {
    std::cerr << "ssreg: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "ssreg: " << e.what() << "\n";
    return kExitProtocol;
  }
  return 0;
}
