// Copyright 2026 The collabtrust Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <collabtrust/metrics.hpp>
#include <collabtrust/scenario.hpp>

#include <cstdint>
#include <ostream>
#include <vector>

namespace collabtrust {

struct RunResult {
    SimReport report;
    std::vector<VerdictRecord> verdicts;
    /// Group membership in force for each executed round.
    std::vector<std::vector<DeviceId>> round_members;
};

/// Runs one repetition of `scenario` with `seed` in place of scenario.seed.
/// When `trace` is set, every event is written to it, one line each.
/// Throws ProtocolViolation if a device handler is driven out of order.
RunResult run_simulation(const Scenario& scenario, std::uint64_t seed,
                         std::ostream* trace = nullptr);

/// Runs scenario.repetitions repetitions with seeds seed, seed+1, ... and
/// merges their reports in repetition order. Traces are concatenated with a
/// "# repetition" header per run.
SimReport run_repetitions(const Scenario& scenario, std::ostream* trace = nullptr);

}  // namespace collabtrust
