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

#include "ssreg/runner.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "ssreg/error.h"
#include "ssreg/prg.h"
#include "ssreg/protocols.h"
#include "ssreg/schedule.h"

namespace ssreg {
namespace {

using nlohmann::json;

double Now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

Dataset SubsetRows(const Dataset& data, const std::vector<std::size_t>& rows) {
  Dataset out = data;
  out.x = SelectRows(data.x, rows);
  out.y = SelectEntries(data.y, rows);
  return out;
}

MetricKind MetricFor(Task task) {
  return task == Task::kLinear ? MetricKind::kRmse : MetricKind::kAuc;
}

double Evaluate(const RunSpec& spec, const PreparedRun& prep, std::size_t fold,
                const std::vector<double>& w) {
  const auto& rows = prep.test_rows[fold];
  const auto scores = LinearScores(SelectRows(prep.data.x, rows), w);
  const auto labels = SelectEntries(prep.data.y, rows);
  return spec.task == Task::kLinear ? Rmse(scores, labels) : Auc(scores, labels);
}

std::vector<double> DecodeWords(const std::vector<std::uint64_t>& words,
                                const FixedPointConfig& fp) {
  std::vector<double> out;
  out.reserve(words.size());
  for (auto v : words) out.push_back(Decode(RingElement{v}, fp));
  return out;
}

std::size_t TrainSize(const PreparedRun& prep, std::size_t fold) {
  return prep.train_rows[fold].size();
}

json FoldJson(std::size_t f, const PreparedRun& prep) {
  return {{"index", f},
          {"train_rows", TrainSize(prep, f)},
          {"test_rows", prep.test_rows[f].size()}};
}

EvalReport MakeReport(const RunSpec& spec, std::vector<double> folds) {
  EvalReport r;
  r.config = spec.ConfigName();
  r.metric = MetricFor(spec.task);
  r.value = std::accumulate(folds.begin(), folds.end(), 0.0) /
            static_cast<double>(folds.size());
  r.folds = std::move(folds);
  return r;
}

}  // namespace

std::string_view MetricName(MetricKind k) {
  return k == MetricKind::kRmse ? "RMSE" : "AUC";
}

std::string EvalReport::TsvHeader() {
  return "config\tmetric\tvalue\tfolds\twall_seconds\ttriple_seconds\toffline";
}

std::string EvalReport::ToTsv() const {
  std::ostringstream os;
  os << std::setprecision(17) << config << '\t' << MetricName(metric) << '\t'
     << value << '\t';
  for (std::size_t i = 0; i < folds.size(); ++i)
    os << (i ? "," : "") << folds[i];
  os << '\t' << wall_seconds << '\t' << triple_seconds << '\t'
     << (offline_triples ? 1 : 0);
  return os.str();
}

EvalReport EvalReport::FromTsv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, '\t')) cells.push_back(cell);
  SSREG_ENFORCE(cells.size() == 7, ErrorCode::kParseError,
                "report row needs 7 tab-separated cells");
  EvalReport r;
  try {
    r.config = cells[0];
    SSREG_ENFORCE(cells[1] == "RMSE" || cells[1] == "AUC",
                  ErrorCode::kParseError, "unknown metric " + cells[1]);
    r.metric = cells[1] == "RMSE" ? MetricKind::kRmse : MetricKind::kAuc;
    r.value = std::stod(cells[2]);
    std::stringstream fs(cells[3]);
    while (std::getline(fs, cell, ',')) r.folds.push_back(std::stod(cell));
    r.wall_seconds = std::stod(cells[4]);
    r.triple_seconds = std::stod(cells[5]);
    r.offline_triples = cells[6] == "1";
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::kParseError, "report row: " + std::string(e.what()));
  }
  return r;
}

std::string FormatTable(const std::vector<EvalReport>& reports) {
  std::size_t width = 6;
  for (const auto& r : reports) width = std::max(width, r.config.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(width) + 2) << "Model"
     << std::setw(8) << "Metric" << std::setw(10) << "Value"
     << "Time (s)\n";
  for (const auto& r : reports) {
    os << std::left << std::setw(static_cast<int>(width) + 2) << r.config
       << std::setw(8) << MetricName(r.metric) << std::setw(10) << std::fixed
       << std::setprecision(4) << r.value << std::setprecision(2)
       << r.wall_seconds << '\n';
    os.unsetf(std::ios::fixed);
  }
  return os.str();
}

Dataset LoadSpecDataset(const RunSpec& spec) {
  const auto& ds = spec.dataset;
  Dataset data;
  if (!ds.path.empty()) {
    data = LoadCsv(ds.path, ds.label_column);
  } else if (ds.synthetic == "linear") {
    data = MakeLinearDataset(ds.rows, ds.cols, ds.seed, ds.noise);
  } else if (ds.synthetic == "separable") {
    data = MakeSeparableDataset(ds.rows, ds.cols, ds.seed);
  } else {
    throw Error(ErrorCode::kConfigError,
                "unknown synthetic dataset '" + ds.synthetic + "'");
  }
  if (ds.subsample > 0) data = Subsample(data, ds.subsample, ds.seed);
  return data;
}

PreparedRun PrepareRun(const RunSpec& spec) {
  PreparedRun prep;
  prep.data = LoadSpecDataset(spec);
  if (spec.dataset.normalize) {
    NormalizedData norm = Normalize(prep.data.x, prep.data.y, spec.task);
    prep.data.x = std::move(norm.x);
    prep.data.y = std::move(norm.y);
    prep.scaler = std::move(norm.scaler);
  }
  prep.test_rows = KFold(prep.data.x.rows, spec.folds, spec.fold_seed);
  for (const auto& test : prep.test_rows) {
    std::vector<bool> held(prep.data.x.rows, false);
    for (auto r : test) held[r] = true;
    std::vector<std::size_t> train;
    for (std::size_t r = 0; r < held.size(); ++r)
      if (!held[r]) train.push_back(r);
    prep.partitions.push_back(Partition(SubsetRows(prep.data, train),
                                        spec.scheme, spec.parties,
                                        spec.dataset.split_ratios,
                                        spec.training.label_owner));
    prep.train_rows.push_back(std::move(train));
  }
  return prep;
}

std::vector<PlannedTriple> RunTriplePlan(const RunSpec& spec,
                                         const PreparedRun& prep) {
  std::vector<PlannedTriple> plan;
  const auto& cfg = spec.training;
  for (std::size_t f = 0; f < prep.partitions.size(); ++f) {
    const auto& parts = prep.partitions[f].parties;
    const std::size_t steps = StepCount(cfg.iterations, cfg.unit,
                                        TrainSize(prep, f), cfg.batch_size);
    std::vector<PlannedTriple> fold_plan;
    if (spec.scheme == Scheme::kHorizontal) {
      fold_plan = HorizontalTriplePlan(spec.parties, parts[0].x.cols,
                                       cfg.batch_size, steps, spec.task);
    } else {
      std::vector<std::size_t> dims;
      for (const auto& p : parts) dims.push_back(p.x.cols);
      fold_plan = VerticalTriplePlan(dims, cfg.batch_size, steps, spec.task);
    }
    plan.insert(plan.end(), fold_plan.begin(), fold_plan.end());
  }
  return plan;
}

nlohmann::json PartyRecord::ToJson() const {
  json j;
  j["party"] = party;
  j["spec_hash"] = spec_hash;
  j["transcript_digest"] = transcript_digest;
  j["traffic"] = {{"bytes_sent", traffic.bytes_sent},
                  {"bytes_received", traffic.bytes_received},
                  {"frames_sent", traffic.frames_sent},
                  {"frames_received", traffic.frames_received}};
  j["folds"] = json::array();
  for (const auto& f : folds) {
    j["folds"].push_back({{"model", f.model},
                          {"model_digest", f.model_digest},
                          {"schedule_digest", f.schedule_digest},
                          {"steps", f.steps},
                          {"step_seconds", f.step_seconds},
                          {"seconds", f.seconds}});
  }
  return j;
}

PartyRecord PartyRecord::FromJson(const nlohmann::json& j) {
  PartyRecord r;
  try {
    r.party = j.at("party").get<PartyId>();
    r.spec_hash = j.at("spec_hash").get<std::string>();
    r.transcript_digest = j.at("transcript_digest").get<std::string>();
    const auto& t = j.at("traffic");
    r.traffic.bytes_sent = t.at("bytes_sent").get<std::size_t>();
    r.traffic.bytes_received = t.at("bytes_received").get<std::size_t>();
    r.traffic.frames_sent = t.at("frames_sent").get<std::size_t>();
    r.traffic.frames_received = t.at("frames_received").get<std::size_t>();
    for (const auto& f : j.at("folds")) {
      PartyFoldRecord fr;
      fr.model = f.at("model").get<std::vector<std::uint64_t>>();
      fr.model_digest = f.at("model_digest").get<std::string>();
      fr.schedule_digest = f.at("schedule_digest").get<std::string>();
      fr.steps = f.at("steps").get<std::size_t>();
      fr.step_seconds = f.at("step_seconds").get<std::vector<double>>();
      fr.seconds = f.at("seconds").get<double>();
      r.folds.push_back(std::move(fr));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, "party record: " + std::string(e.what()));
  }
  return r;
}

PartyRecord RunPartyFolds(Session& s, const RunSpec& spec,
                          const PreparedRun& prep, TripleSource* triples) {
  const std::size_t n = s.num_parties();
  const PartyId self = s.id();
  SSREG_ENFORCE(n == spec.parties, ErrorCode::kRosterMismatch,
                "session size differs from the spec's party count");
  PartyRecord record;
  record.party = self;
  record.spec_hash = spec.Hash();
  s.SetRound(0);
  AgreeOnValue(s, DeriveSeed(0, record.spec_hash), ErrorCode::kSpecHashMismatch,
               "spec hash");

  for (std::size_t f = 0; f < prep.partitions.size(); ++f) {
    const double start = Now();
    const PartyData& mine = prep.partitions[f].parties.at(self);
    EngineStats stats;
    RingMatrix local;
    if (spec.scheme == Scheme::kHorizontal) {
      local = TrainHorizontalParty(s, mine, spec.training, triples, nullptr,
                                   &stats);
    } else {
      local = TrainVerticalParty(s, mine, spec.training, triples, nullptr,
                                 &stats);
    }
    // Reveal: w = sum of shares (H) or the concatenated blocks (V).
    s.SetRound(s.round() + 1);
    for (PartyId p = 0; p < n; ++p)
      if (p != self) s.Send(p, MsgKind::kWShare, local);
    std::vector<RingMatrix> parts(n);
    parts[self] = local;
    for (PartyId p = 0; p < n; ++p)
      if (p != self) parts[p] = s.Recv(p, MsgKind::kWShare);
    RingMatrix model;
    if (spec.scheme == Scheme::kHorizontal) {
      model = RingMatrix::Zeros(local.rows(), 1);
      for (const auto& part : parts) {
        SSREG_ENFORCE(part.SameShape(model), ErrorCode::kDimensionMismatch,
                      "revealed share shape");
        model = MatAdd(model, part);
      }
    } else {
      model = VStack(parts);
    }
    PartyFoldRecord fr;
    fr.model = model.values();
    fr.model_digest = HexDigest(Serialize(model));
    fr.schedule_digest = stats.schedule_digest;
    fr.steps = stats.steps;
    fr.step_seconds = std::move(stats.step_seconds);
    fr.seconds = Now() - start;
    record.folds.push_back(std::move(fr));
  }
  record.traffic = s.traffic();
  record.transcript_digest = s.transcript().Digest();
  return record;
}

RunResult AssembleSecureRun(const RunSpec& spec, const PreparedRun& prep,
                            const std::vector<PartyRecord>& records,
                            double triple_seconds) {
  SSREG_ENFORCE(records.size() == spec.parties, ErrorCode::kInvalidArgument,
                "one record per party expected");
  const std::string hash = spec.Hash();
  for (const auto& r : records) {
    SSREG_ENFORCE(r.spec_hash == hash, ErrorCode::kSpecHashMismatch,
                  "party " + std::to_string(r.party) + " ran a different spec");
    SSREG_ENFORCE(r.folds.size() == prep.test_rows.size(),
                  ErrorCode::kHashMismatch,
                  "party " + std::to_string(r.party) + " reports " +
                      std::to_string(r.folds.size()) + " folds");
  }
  const bool offline = spec.training.smm == SmmVariant::kTrustedInitializer &&
                       spec.triple_mode == TripleMode::kOffline;
  RunResult result;
  json& m = result.manifest;
  m["config"] = spec.ConfigName();
  m["spec_hash"] = hash;
  m["spec"] = spec.CanonicalJson();
  m["folds"] = json::array();
  json& t = result.timing;
  t["config"] = spec.ConfigName();
  t["folds"] = json::array();

  std::vector<double> metrics;
  double wall = 0;
  for (std::size_t f = 0; f < prep.test_rows.size(); ++f) {
    const auto& first = records[0].folds[f];
    double fold_seconds = 0;
    json step_seconds = json::array();
    for (const auto& r : records) {
      SSREG_ENFORCE(r.folds[f].model_digest == first.model_digest &&
                        r.folds[f].schedule_digest == first.schedule_digest,
                    ErrorCode::kHashMismatch,
                    "party " + std::to_string(r.party) +
                        " disagrees on fold " + std::to_string(f));
      fold_seconds = std::max(fold_seconds, r.folds[f].seconds);
      step_seconds.push_back(r.folds[f].step_seconds);
    }
    const auto w = DecodeWords(first.model, spec.training.fixed_point);
    const double metric = Evaluate(spec, prep, f, w);
    metrics.push_back(metric);
    wall += fold_seconds;
    json fj = FoldJson(f, prep);
    fj["steps"] = first.steps;
    fj["schedule_digest"] = first.schedule_digest;
    fj["model_digest"] = first.model_digest;
    fj["w"] = w;
    fj["metric"] = metric;
    m["folds"].push_back(fj);
    t["folds"].push_back({{"seconds", fold_seconds},
                          {"step_seconds_by_party", step_seconds}});
  }
  m["parties"] = json::array();
  for (const auto& r : records) {
    m["parties"].push_back({{"id", r.party},
                            {"bytes_sent", r.traffic.bytes_sent},
                            {"bytes_received", r.traffic.bytes_received},
                            {"frames_sent", r.traffic.frames_sent},
                            {"frames_received", r.traffic.frames_received},
                            {"transcript_digest", r.transcript_digest}});
  }
  m["triples"] = {
      {"provisioning",
       spec.training.smm == SmmVariant::kNoInitializer
           ? "none"
           : (offline ? "offline" : "online")},
      {"planned", spec.training.smm == SmmVariant::kTrustedInitializer
                      ? RunTriplePlan(spec, prep).size()
                      : 0}};

  result.report = MakeReport(spec, metrics);
  result.report.wall_seconds = wall;
  result.report.triple_seconds = triple_seconds;
  result.report.offline_triples = offline;
  m["metric"] = std::string(MetricName(result.report.metric));
  m["value"] = result.report.value;
  t["wall_seconds"] = wall;
  t["triple_seconds"] = triple_seconds;
  t["wall_excludes_triples"] = offline;
  return result;
}

RunResult RunPlainSpec(const RunSpec& spec, const PreparedRun& prep) {
  const auto& cfg = spec.training;
  PlainConfig pc;
  pc.learning_rate = cfg.learning_rate;
  pc.sigmoid = cfg.sigmoid;
  pc.record_trace = false;
  const PlainTask task =
      spec.task == Task::kLinear ? PlainTask::kLinear : spec.plain_link;

  RunResult result;
  json& m = result.manifest;
  m["config"] = spec.ConfigName();
  m["spec_hash"] = spec.Hash();
  m["spec"] = spec.CanonicalJson();
  m["link"] = std::string(PlainTaskName(task));
  m["folds"] = json::array();
  result.timing["config"] = spec.ConfigName();
  result.timing["folds"] = json::array();
  std::vector<double> metrics;
  double wall = 0;
  for (std::size_t f = 0; f < prep.partitions.size(); ++f) {
    const auto& part = prep.partitions[f];
    const Dataset train = Reassemble(part);
    BatchSchedule schedule;
    if (spec.scheme == Scheme::kHorizontal) {
      std::vector<std::size_t> rows;
      for (const auto& p : part.parties) rows.push_back(p.x.rows);
      schedule = HorizontalSchedule(rows, cfg);
    } else {
      schedule = VerticalSchedule(train.x.rows, cfg);
    }
    const double start = Now();
    const PlainModel model = TrainPlain(train.x, train.y, schedule, pc, task);
    const double seconds = Now() - start;
    const double metric = Evaluate(spec, prep, f, model.w);
    metrics.push_back(metric);
    wall += seconds;
    json fj = FoldJson(f, prep);
    fj["steps"] = schedule.size();
    fj["schedule_digest"] = schedule.Digest();
    fj["w"] = model.w;
    fj["metric"] = metric;
    m["folds"].push_back(fj);
    result.timing["folds"].push_back({{"seconds", seconds}});
  }
  result.report = MakeReport(spec, metrics);
  result.report.wall_seconds = wall;
  m["metric"] = std::string(MetricName(result.report.metric));
  m["value"] = result.report.value;
  result.timing["wall_seconds"] = wall;
  return result;
}

double SelectLearningRate(const RunSpec& spec,
                          const std::vector<double>& grid) {
  SSREG_ENFORCE(!grid.empty(), ErrorCode::kInvalidArgument,
                "empty learning-rate grid");
  RunSpec plain = spec;
  if (spec.secure) plain.plain_link = PlainTask::kLogisticPoly;
  plain.secure = false;
  const PreparedRun prep = PrepareRun(plain);
  const bool lower = MetricFor(spec.task) == MetricKind::kRmse;
  double best_rate = grid.front();
  double best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    plain.training.learning_rate = grid[i];
    const double v = RunPlainSpec(plain, prep).report.value;
    if (i == 0 || (lower ? v < best : v > best)) {
      best = v;
      best_rate = grid[i];
    }
  }
  return best_rate;
}

RunResult RunSpecInThreads(const RunSpec& spec) {
  const PreparedRun prep = PrepareRun(spec);
  if (!spec.secure) return RunPlainSpec(spec, prep);

  TrustedInitializer dealer(DeriveSeed(spec.training.seed, "dealer"),
                            spec.triple_mode == TripleMode::kOnline);
  if (spec.training.smm == SmmVariant::kTrustedInitializer &&
      spec.triple_mode == TripleMode::kOffline)
    dealer.Provision(RunTriplePlan(spec, prep));
  std::vector<PartyRecord> records(spec.parties);
  SessionOptions options;
  options.timeout = spec.timeout;
  RunLoopbackParties(
      spec.parties,
      [&](Session& s) {
        records[s.id()] = RunPartyFolds(s, spec, prep, &dealer);
      },
      options);
  return AssembleSecureRun(spec, prep, records, dealer.generation_seconds());
}

void WriteRunOutputs(const RunResult& result,
                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream f(dir / name, std::ios::trunc);
    SSREG_ENFORCE(f.good(), ErrorCode::kIoError,
                  "cannot write " + (dir / name).string());
    f << text;
  };
  write("manifest.json", result.manifest.dump(2) + "\n");
  write("timing.json", result.timing.dump(2) + "\n");
  write("report.tsv",
        EvalReport::TsvHeader() + "\n" + result.report.ToTsv() + "\n");
}

std::vector<ScalingPoint> RunScaling(const ScalingOptions& options) {
  std::vector<ScalingPoint> points;
  for (Task task : {Task::kLinear, Task::kLogistic}) {
    for (Scheme scheme : {Scheme::kHorizontal, Scheme::kVertical}) {
      RunSpec named;
      named.task = task;
      named.scheme = scheme;
      named.training.smm = options.smm;
      const std::string engine = named.ConfigName();
      for (std::size_t m : options.sizes) {
        Dataset data = task == Task::kLinear
                           ? MakeLinearDataset(m, options.d, options.seed)
                           : MakeSeparableDataset(m, options.d, options.seed);
        NormalizedData norm = Normalize(data.x, data.y, task);
        data.x = std::move(norm.x);
        data.y = std::move(norm.y);
        const auto parts = Partition(data, scheme, 2);
        TrainingConfig cfg;
        cfg.task = task;
        cfg.learning_rate = 0.01;
        cfg.batch_size = options.batch;
        cfg.iterations = options.epochs;
        cfg.unit = ScheduleUnit::kEpochs;
        cfg.smm = options.smm;
        cfg.seed = options.seed;
        SessionOptions session;
        session.record_transcript = false;
        const TrainOutcome out =
            scheme == Scheme::kHorizontal
                ? RunHorizontal(parts.parties, cfg, TripleMode::kOnline,
                                nullptr, session)
                : RunVertical(parts.parties, cfg, TripleMode::kOnline, nullptr,
                              session);
        points.push_back({engine, m, out.stats[0].steps,
                          out.seconds - out.triple_seconds});
      }
    }
  }
  return points;
}

std::vector<double> DoublingRatios(const std::vector<ScalingPoint>& points,
                                   const std::string& engine) {
  std::vector<const ScalingPoint*> mine;
  for (const auto& p : points)
    if (p.engine == engine) mine.push_back(&p);
  std::sort(mine.begin(), mine.end(),
            [](const ScalingPoint* a, const ScalingPoint* b) { return a->m < b->m; });
  std::vector<double> ratios;
  for (std::size_t i = 1; i < mine.size(); ++i)
    ratios.push_back(mine[i]->seconds / mine[i - 1]->seconds);
  return ratios;
}

}  // namespace ssreg
