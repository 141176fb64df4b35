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

#include "ssreg/run_spec.h"

#include <fstream>
#include <map>
#include <set>

#include "ssreg/error.h"
#include "ssreg/prg.h"

namespace ssreg {
namespace {

using nlohmann::json;

enum class Kind { kString, kBool, kUnsigned, kNumber, kObject, kArray };

struct Field {
  Kind kind;
  std::vector<std::string> allowed;  // enumerations for strings
};

// Embedded schema: every accepted key with its type.
const std::map<std::string, std::map<std::string, Field>>& Schema() {
  static const auto* schema = new std::map<std::string, std::map<std::string, Field>>{
      {"",
       {{"task", {Kind::kString, {"LiRe", "LoRe"}}},
        {"secure", {Kind::kBool, {}}},
        {"scheme", {Kind::kString, {"H", "V"}}},
        {"smm", {Kind::kString, {"TI", "OTI"}}},
        {"plain_link", {Kind::kString, {"true", "poly"}}},
        {"parties", {Kind::kUnsigned, {}}},
        {"training", {Kind::kObject, {}}},
        {"dataset", {Kind::kObject, {}}},
        {"folds", {Kind::kUnsigned, {}}},
        {"fold_seed", {Kind::kUnsigned, {}}},
        {"triples", {Kind::kObject, {}}},
        {"roster", {Kind::kArray, {}}},
        {"timeout_ms", {Kind::kUnsigned, {}}},
        {"output", {Kind::kString, {}}}}},
      {"training",
       {{"learning_rate", {Kind::kNumber, {}}},
        {"batch_size", {Kind::kUnsigned, {}}},
        {"iterations", {Kind::kUnsigned, {}}},
        {"unit", {Kind::kString, {"steps", "epochs"}}},
        {"owner_policy", {Kind::kString, {"sequential", "seeded-random"}}},
        {"label_owner", {Kind::kUnsigned, {}}},
        {"seed", {Kind::kUnsigned, {}}},
        {"private_seed", {Kind::kUnsigned, {}}},
        {"fractional_bits", {Kind::kUnsigned, {}}},
        {"sigmoid", {Kind::kArray, {}}}}},
      {"dataset",
       {{"path", {Kind::kString, {}}},
        {"label_column", {Kind::kString, {}}},
        {"synthetic", {Kind::kString, {"", "linear", "separable"}}},
        {"rows", {Kind::kUnsigned, {}}},
        {"cols", {Kind::kUnsigned, {}}},
        {"seed", {Kind::kUnsigned, {}}},
        {"noise", {Kind::kNumber, {}}},
        {"subsample", {Kind::kUnsigned, {}}},
        {"normalize", {Kind::kBool, {}}},
        {"split_ratios", {Kind::kArray, {}}}}},
      {"triples",
       {{"mode", {Kind::kString, {"offline", "online"}}},
        {"dir", {Kind::kString, {}}}}},
      {"roster",
       {{"id", {Kind::kUnsigned, {}}},
        {"host", {Kind::kString, {}}},
        {"port", {Kind::kUnsigned, {}}}}},
  };
  return *schema;
}

bool HasKind(const json& v, Kind k) {
  switch (k) {
    case Kind::kString: return v.is_string();
    case Kind::kBool: return v.is_boolean();
    case Kind::kUnsigned:
      return v.is_number_unsigned() ||
             (v.is_number_integer() && v.get<std::int64_t>() >= 0);
    case Kind::kNumber: return v.is_number();
    case Kind::kObject: return v.is_object();
    case Kind::kArray: return v.is_array();
  }
  return false;
}

void CheckObject(const json& obj, const std::string& section,
                 const std::string& where) {
  SSREG_ENFORCE(obj.is_object(), ErrorCode::kConfigError,
                where + " must be an object");
  const auto& fields = Schema().at(section);
  for (const auto& [key, value] : obj.items()) {
    const auto it = fields.find(key);
    SSREG_ENFORCE(it != fields.end(), ErrorCode::kConfigError,
                  "unknown key '" + where + key + "'");
    SSREG_ENFORCE(HasKind(value, it->second.kind), ErrorCode::kConfigError,
                  "'" + where + key + "' has the wrong type");
    if (!it->second.allowed.empty()) {
      const auto& allowed = it->second.allowed;
      SSREG_ENFORCE(std::find(allowed.begin(), allowed.end(),
                              value.get<std::string>()) != allowed.end(),
                    ErrorCode::kConfigError,
                    "'" + where + key + "' has unsupported value " +
                        value.dump());
    }
  }
}

void Validate(const json& j) {
  CheckObject(j, "", "");
  for (const char* section : {"training", "dataset", "triples"})
    if (j.contains(section)) CheckObject(j[section], section, std::string(section) + ".");
  if (j.contains("roster"))
    for (const auto& e : j["roster"]) CheckObject(e, "roster", "roster[].");
  if (j.contains("training") && j["training"].contains("sigmoid")) {
    const auto& q = j["training"]["sigmoid"];
    SSREG_ENFORCE(q.size() == 4, ErrorCode::kConfigError,
                  "training.sigmoid needs 4 coefficients");
    for (const auto& v : q)
      SSREG_ENFORCE(v.is_number(), ErrorCode::kConfigError,
                    "training.sigmoid entries must be numbers");
  }
  if (j.contains("dataset") && j["dataset"].contains("split_ratios")) {
    for (const auto& v : j["dataset"]["split_ratios"])
      SSREG_ENFORCE(v.is_number(), ErrorCode::kConfigError,
                    "dataset.split_ratios entries must be numbers");
  }
}

template <typename T>
void Read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj[key].get<T>();
}

}  // namespace

std::string RunSpec::ConfigName() const {
  std::string name(TaskName(task));
  if (!secure) return name;
  return "Sec-" + name + "-" + std::string(SmmVariantName(training.smm)) + "-" +
         std::string(SchemeName(scheme));
}

nlohmann::json RunSpec::ToJson() const {
  json j;
  j["task"] = std::string(TaskName(task));
  j["secure"] = secure;
  j["scheme"] = std::string(SchemeName(scheme));
  j["smm"] = std::string(SmmVariantName(training.smm));
  j["plain_link"] = plain_link == PlainTask::kLogisticPoly ? "poly" : "true";
  j["parties"] = parties;
  const auto& t = training;
  j["training"] = {
      {"learning_rate", t.learning_rate},
      {"batch_size", t.batch_size},
      {"iterations", t.iterations},
      {"unit", std::string(ScheduleUnitName(t.unit))},
      {"owner_policy", std::string(OwnerPolicyName(t.owner_policy))},
      {"label_owner", t.label_owner},
      {"seed", t.seed},
      {"private_seed", t.private_seed},
      {"fractional_bits", t.fixed_point.fractional_bits},
      {"sigmoid", {t.sigmoid.q0, t.sigmoid.q1, t.sigmoid.q2, t.sigmoid.q3}}};
  const auto& d = dataset;
  j["dataset"] = {{"path", d.path},         {"label_column", d.label_column},
                  {"synthetic", d.synthetic}, {"rows", d.rows},
                  {"cols", d.cols},         {"seed", d.seed},
                  {"noise", d.noise},       {"subsample", d.subsample},
                  {"normalize", d.normalize}, {"split_ratios", d.split_ratios}};
  j["folds"] = folds;
  j["fold_seed"] = fold_seed;
  j["triples"] = {
      {"mode", triple_mode == TripleMode::kOffline ? "offline" : "online"},
      {"dir", triple_dir}};
  j["roster"] = json::array();
  for (const auto& e : roster)
    j["roster"].push_back({{"id", e.id}, {"host", e.host}, {"port", e.port}});
  j["timeout_ms"] = static_cast<std::uint64_t>(timeout.count());
  j["output"] = output;
  return j;
}

RunSpec RunSpec::FromJson(const nlohmann::json& j) {
  Validate(j);
  RunSpec s;
  if (j.contains("task")) s.task = ParseTask(j["task"].get<std::string>());
  Read(j, "secure", s.secure);
  if (j.contains("scheme"))
    s.scheme = ParseScheme(j["scheme"].get<std::string>());
  if (j.contains("smm"))
    s.training.smm = ParseSmmVariant(j["smm"].get<std::string>());
  if (j.contains("plain_link"))
    s.plain_link = j["plain_link"] == "poly" ? PlainTask::kLogisticPoly
                                             : PlainTask::kLogisticTrue;
  Read(j, "parties", s.parties);
  if (j.contains("training")) {
    const auto& t = j["training"];
    auto& c = s.training;
    Read(t, "learning_rate", c.learning_rate);
    Read(t, "batch_size", c.batch_size);
    Read(t, "iterations", c.iterations);
    if (t.contains("unit"))
      c.unit = ParseScheduleUnit(t["unit"].get<std::string>());
    if (t.contains("owner_policy"))
      c.owner_policy = ParseOwnerPolicy(t["owner_policy"].get<std::string>());
    Read(t, "label_owner", c.label_owner);
    Read(t, "seed", c.seed);
    Read(t, "private_seed", c.private_seed);
    Read(t, "fractional_bits", c.fixed_point.fractional_bits);
    if (t.contains("sigmoid")) {
      const auto& q = t["sigmoid"];
      c.sigmoid = {q[0].get<double>(), q[1].get<double>(), q[2].get<double>(),
                   q[3].get<double>()};
    }
  }
  s.training.task = s.task;
  if (j.contains("dataset")) {
    const auto& d = j["dataset"];
    auto& ds = s.dataset;
    Read(d, "path", ds.path);
    Read(d, "label_column", ds.label_column);
    Read(d, "synthetic", ds.synthetic);
    Read(d, "rows", ds.rows);
    Read(d, "cols", ds.cols);
    Read(d, "seed", ds.seed);
    Read(d, "noise", ds.noise);
    Read(d, "subsample", ds.subsample);
    Read(d, "normalize", ds.normalize);
    Read(d, "split_ratios", ds.split_ratios);
  }
  Read(j, "folds", s.folds);
  Read(j, "fold_seed", s.fold_seed);
  if (j.contains("triples")) {
    const auto& t = j["triples"];
    if (t.contains("mode"))
      s.triple_mode =
          t["mode"] == "online" ? TripleMode::kOnline : TripleMode::kOffline;
    Read(t, "dir", s.triple_dir);
  }
  if (j.contains("roster")) {
    for (const auto& e : j["roster"]) {
      Endpoint ep;
      Read(e, "id", ep.id);
      Read(e, "host", ep.host);
      Read(e, "port", ep.port);
      s.roster.push_back(ep);
    }
  }
  if (j.contains("timeout_ms"))
    s.timeout = std::chrono::milliseconds(j["timeout_ms"].get<std::uint64_t>());
  Read(j, "output", s.output);

  SSREG_ENFORCE(s.parties >= 2, ErrorCode::kConfigError,
                "parties must be at least 2");
  SSREG_ENFORCE(s.folds >= 2, ErrorCode::kConfigError,
                "folds must be at least 2");
  SSREG_ENFORCE(s.dataset.path.empty() != s.dataset.synthetic.empty(),
                ErrorCode::kConfigError,
                "dataset needs exactly one of path and synthetic");
  SSREG_ENFORCE(s.dataset.split_ratios.empty() ||
                    s.dataset.split_ratios.size() == s.parties,
                ErrorCode::kConfigError, "need one split ratio per party");
  SSREG_ENFORCE(s.roster.empty() || s.roster.size() == s.parties,
                ErrorCode::kConfigError, "roster size differs from parties");
  try {
    s.training.Validate(s.parties);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }
  return s;
}

nlohmann::json RunSpec::CanonicalJson() const {
  json j = ToJson();
  j.erase("roster");
  j.erase("output");
  j.erase("timeout_ms");
  j["triples"].erase("dir");
  j["training"].erase("private_seed");
  return j;
}

std::string RunSpec::Hash() const {
  const std::string canonical = CanonicalJson().dump();
  return HexDigest(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(canonical.data()),
      canonical.size()));
}

RunSpec LoadRunSpec(const std::filesystem::path& path) {
  std::ifstream f(path);
  SSREG_ENFORCE(f.good(), ErrorCode::kConfigError,
                "cannot read spec " + path.string());
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError,
                "spec " + path.string() + ": " + e.what());
  }
  return RunSpec::FromJson(j);
}

void SaveRunSpec(const std::filesystem::path& path, const RunSpec& spec) {
  std::ofstream f(path, std::ios::trunc);
  SSREG_ENFORCE(f.good(), ErrorCode::kIoError, "cannot write " + path.string());
  f << spec.ToJson().dump(2) << '\n';
}

std::vector<RunSpec> StandardConfigurations(const RunSpec& linear,
                                            const RunSpec& logistic) {
  std::vector<RunSpec> out;
  for (const RunSpec* base : {&linear, &logistic}) {
    const Task task = base == &linear ? Task::kLinear : Task::kLogistic;
    for (SmmVariant v :
         {SmmVariant::kTrustedInitializer, SmmVariant::kNoInitializer}) {
      for (Scheme sc : {Scheme::kHorizontal, Scheme::kVertical}) {
        RunSpec s = *base;
        s.task = task;
        s.training.task = task;
        s.secure = true;
        s.training.smm = v;
        s.scheme = sc;
        out.push_back(s);
      }
    }
    RunSpec plain = *base;
    plain.task = task;
    plain.training.task = task;
    plain.secure = false;
    out.push_back(plain);
  }
  return out;
}

}  // namespace ssreg
