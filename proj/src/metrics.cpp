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

#include <collabtrust/metrics.hpp>

#include <collabtrust/error.hpp>

#include <algorithm>
#include <cmath>

namespace collabtrust {

void EnergyModel::validate() const {
    for (double c : {e_op, e_tx, e_rx})
        if (!std::isfinite(c) || c < 0.0) throw ContractError("energy costs must be finite and non-negative");
}

void EnergyLedger::account(const AccountingEvent& ev) {
    if (const auto* x = std::get_if<Execution>(&ev))
        counters_[x->device].ops += x->op_count;
    else if (const auto* t = std::get_if<Transmission>(&ev))
        ++counters_[t->sender].sent;
    else
        ++counters_[std::get<Reception>(ev).receiver].received;
}

DeviceCounters EnergyLedger::counters(DeviceId id) const {
    const auto it = counters_.find(id);
    return it == counters_.end() ? DeviceCounters{} : it->second;
}

double EnergyLedger::energy(DeviceId id) const {
    const auto c = counters(id);
    return model_.e_op * static_cast<double>(c.ops) + model_.e_tx * static_cast<double>(c.sent) +
           model_.e_rx * static_cast<double>(c.received);
}

double EnergyLedger::total() const {
    double sum = 0.0;
    for (const auto& [id, c] : counters_) sum += energy(id);
    return sum;
}

DetectionSummary detection_stats(std::span<const VerdictRecord> verdicts,
                                 const std::map<DeviceId, AdversaryProfile>& ground_truth) {
    const auto honest_fault = [&](DeviceId id) {
        const auto it = ground_truth.find(id);
        return it == ground_truth.end() || it->second.fault.kind == FaultKind::Honest;
    };
    const auto fully_honest = [&](DeviceId id) {
        const auto it = ground_truth.find(id);
        return it == ground_truth.end() || it->second.is_honest();
    };

    DetectionSummary s;
    for (const auto& rec : verdicts) {
        const auto& v = rec.verdict;
        switch (v.outcome) {
            case Outcome::Trusted: ++s.trusted; break;
            case Outcome::Inconclusive: ++s.inconclusive; break;
            case Outcome::Flagged:
                ++s.flagged;
                if (honest_fault(v.checkee)) ++s.false_positives;
                if (fully_honest(rec.device)) {
                    auto [it, fresh] = s.first_flag_round.try_emplace(v.checkee, v.round);
                    if (!fresh) it->second = std::min(it->second, v.round);
                }
                break;
        }
    }
    return s;
}

const DeviceStats* SimReport::device(DeviceId id) const {
    for (const auto& d : devices)
        if (d.id == id) return &d;
    return nullptr;
}

const DetectionStat* SimReport::detection(DeviceId id) const {
    for (const auto& d : detections)
        if (d.device == id) return &d;
    return nullptr;
}

double SimReport::detection_rate(DeviceId id) const {
    const auto* d = detection(id);
    if (d == nullptr || repetitions == 0) return 0.0;
    return static_cast<double>(d->detected_runs) / repetitions;
}

namespace {

void keep_earliest(std::optional<Round>& into, const std::optional<Round>& other) {
    if (other && (!into || *other < *into)) into = other;
}

}  // namespace

void merge_into(SimReport& into, const SimReport& run) {
    if (into.repetitions == 0) {
        into = run;
        return;
    }
    if (into.devices.size() != run.devices.size() || into.detections.size() != run.detections.size())
        throw ContractError("merge_into: reports describe different populations");

    into.repetitions += run.repetitions;
    into.rounds_executed += run.rounds_executed;
    into.verdicts += run.verdicts;
    into.trusted += run.trusted;
    into.flagged += run.flagged;
    into.inconclusive += run.inconclusive;
    into.false_positives += run.false_positives;
    into.messages_sent += run.messages_sent;
    into.messages_delivered += run.messages_delivered;
    into.messages_dropped += run.messages_dropped;
    into.messages_late += run.messages_late;
    into.messages_stray += run.messages_stray;
    into.messages_in_flight += run.messages_in_flight;
    into.energy_total += run.energy_total;
    into.halted_runs += run.halted_runs;
    if (into.halt_reason.empty()) into.halt_reason = run.halt_reason;

    for (std::size_t i = 0; i < into.devices.size(); ++i) {
        auto& a = into.devices[i];
        const auto& b = run.devices[i];
        if (a.id != b.id) throw ContractError("merge_into: device order differs");
        a.energy += b.energy;
        a.ops += b.ops;
        a.sent += b.sent;
        a.received += b.received;
        a.flags += b.flags;
        keep_earliest(a.excluded_round, b.excluded_round);
        keep_earliest(a.detection_round, b.detection_round);
    }
    for (std::size_t i = 0; i < into.detections.size(); ++i) {
        auto& a = into.detections[i];
        const auto& b = run.detections[i];
        if (a.device != b.device) throw ContractError("merge_into: detection order differs");
        a.detected_runs += b.detected_runs;
        a.latency_sum += b.latency_sum;
        keep_earliest(a.first_detection_round, b.first_detection_round);
    }
}

}  // namespace collabtrust
