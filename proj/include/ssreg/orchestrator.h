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

#ifndef SSREG_ORCHESTRATOR_H_
#define SSREG_ORCHESTRATOR_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "ssreg/run_spec.h"
#include "ssreg/runner.h"

namespace ssreg {

enum class ExecutionMode { kThreads, kProcesses };

struct SpawnOptions {
  std::filesystem::path cli;       // the ssreg executable (process mode)
  std::filesystem::path work_dir;  // resolved spec, triples, logs, records
  // Test hook: SIGKILL this party once kill_after has elapsed.
  std::optional<PartyId> kill_party;
  std::chrono::milliseconds kill_after{0};
};

// Runs every party of a secure spec and assembles the result. Process mode
// writes per-pair triple files, launches `ssreg train --party i` per party
// over localhost TCP and raises kPartyCrashed if any child fails.
RunResult SpawnParties(const RunSpec& spec, ExecutionMode mode,
                       const SpawnOptions& options);

// Body of one party process: TCP mesh from the roster, triples from the
// spec's triple directory.
PartyRecord RunPartyProcess(const RunSpec& spec, PartyId party);

// Ports that were free on 127.0.0.1 a moment ago.
std::vector<std::uint16_t> PickFreePorts(std::size_t n);

// Writes the per-pair triple files for a spec; returns generation seconds.
double WriteRunTriples(const RunSpec& spec, const PreparedRun& prep,
                       const std::filesystem::path& dir);

}  // namespace ssreg

#endif  // SSREG_ORCHESTRATOR_H_
