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

#include <collabtrust/adversary.hpp>
#include <collabtrust/types.hpp>
#include <collabtrust/verdict.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace collabtrust {

/// Abstract energy units charged per primitive step, per transmission and
/// per reception.
struct EnergyModel {
    double e_op = 1.0;
    double e_tx = 1.0;
    double e_rx = 1.0;

    void validate() const;
    friend bool operator==(const EnergyModel&, const EnergyModel&) = default;
};

struct Execution {
    DeviceId device;
    std::uint32_t op_count = 0;
};
struct Transmission {
    DeviceId sender;
};
struct Reception {
    DeviceId receiver;
};
using AccountingEvent = std::variant<Execution, Transmission, Reception>;

struct DeviceCounters {
    std::uint64_t ops = 0;
    std::uint64_t sent = 0;
    std::uint64_t received = 0;

    friend bool operator==(const DeviceCounters&, const DeviceCounters&) = default;
};

/// Counts work per device. Energy is derived from the counters, so
/// e_op*ops + e_tx*sent + e_rx*received holds exactly.
class EnergyLedger {
public:
    explicit EnergyLedger(EnergyModel model = {}) : model_(model) {}

    /// Transmissions are charged even when the channel later drops them.
    void account(const AccountingEvent& ev);

    const EnergyModel& model() const noexcept { return model_; }
    DeviceCounters counters(DeviceId id) const;
    double energy(DeviceId id) const;
    double total() const;
    const std::map<DeviceId, DeviceCounters>& all() const noexcept { return counters_; }

private:
    EnergyModel model_;
    std::map<DeviceId, DeviceCounters> counters_;
};

/// A verdict as concluded by one device.
struct VerdictRecord {
    DeviceId device;
    Verdict verdict;
};

struct DetectionSummary {
    std::uint64_t trusted = 0;
    std::uint64_t flagged = 0;
    std::uint64_t inconclusive = 0;
    std::uint64_t false_positives = 0;
    /// First round each device was FLAGGED by a fully honest device.
    std::map<DeviceId, Round> first_flag_round;
};

/// Detection quality from a run's verdict log. A device counts as corrupt
/// when its fault model is not HONEST; a false positive is any FLAGGED
/// verdict on a device whose fault is HONEST.
DetectionSummary detection_stats(std::span<const VerdictRecord> verdicts,
                                 const std::map<DeviceId, AdversaryProfile>& ground_truth);

struct DeviceStats {
    DeviceId id;
    double energy = 0.0;
    std::uint64_t ops = 0;
    std::uint64_t sent = 0;
    std::uint64_t received = 0;
    std::uint64_t flags = 0;
    std::optional<Round> excluded_round;
    std::optional<Round> detection_round;

    friend bool operator==(const DeviceStats&, const DeviceStats&) = default;
};

struct DetectionStat {
    DeviceId device;
    std::uint64_t detected_runs = 0;
    /// Sum over detected runs of (detection round - first participation round).
    std::uint64_t latency_sum = 0;
    std::optional<Round> first_detection_round;

    friend bool operator==(const DetectionStat&, const DetectionStat&) = default;
};

/// Metrics of one run, or the merge of several repetitions. Counters are
/// summed across repetitions; round-valued fields keep the earliest value.
struct SimReport {
    std::uint32_t repetitions = 0;
    std::uint64_t rounds_executed = 0;
    std::uint64_t verdicts = 0;
    std::uint64_t trusted = 0;
    std::uint64_t flagged = 0;
    std::uint64_t inconclusive = 0;
    std::uint64_t false_positives = 0;
    std::uint64_t messages_sent = 0;
    std::uint64_t messages_delivered = 0;
    std::uint64_t messages_dropped = 0;
    std::uint64_t messages_late = 0;
    std::uint64_t messages_stray = 0;
    std::uint64_t messages_in_flight = 0;
    double energy_total = 0.0;
    std::uint32_t halted_runs = 0;
    std::string halt_reason;
    std::vector<DeviceStats> devices;
    std::vector<DetectionStat> detections;

    const DeviceStats* device(DeviceId id) const;
    const DetectionStat* detection(DeviceId id) const;
    /// detected_runs / repetitions, 0 for devices that are not tracked.
    double detection_rate(DeviceId id) const;

    friend bool operator==(const SimReport&, const SimReport&) = default;
};

/// Folds `run` into `into`. Device and detection lists must describe the
/// same population.
void merge_into(SimReport& into, const SimReport& run);

}  // namespace collabtrust
