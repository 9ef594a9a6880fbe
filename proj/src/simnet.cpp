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

#include <collabtrust/simnet.hpp>

#include <collabtrust/error.hpp>

#include <set>
#include <string>
#include <utility>

namespace collabtrust {

void GroupConfig::validate() const {
    if (members.size() < 3) throw ContractError("a group needs at least 3 members");
    std::set<DeviceId> seen(members.begin(), members.end());
    if (seen.size() != members.size()) throw ContractError("group members must be distinct");
    if (quorum < 1 || quorum > members.size() - 1)
        throw ContractError("quorum " + std::to_string(quorum) + " outside [1, group size - 1]");
}

void NetworkModel::validate(Tick round_deadline) const {
    if (latency_min > latency_max) throw ContractError("latency_min exceeds latency_max");
    if (latency_max >= round_deadline)
        throw ContractError("latency_max must be below the round deadline");
    if (!(drop_prob >= 0.0 && drop_prob <= 1.0))
        throw ContractError("drop_prob must lie in [0,1]");
}

std::uint64_t EventQueue::schedule(Event ev) {
    ev.seq = next_seq_++;
    heap_.push(std::move(ev));
    return next_seq_ - 1;
}

std::optional<Event> EventQueue::pop() {
    if (heap_.empty()) return std::nullopt;
    Event ev = heap_.top();
    heap_.pop();
    return ev;
}

std::optional<Event> send(Envelope msg, const NetworkModel& model, SplitMix64& rng, Tick now) {
    if (msg.from == msg.to) throw ContractError("send: a device does not message itself");
    if (rng.bernoulli(model.drop_prob)) return std::nullopt;
    const Tick latency = model.latency_min + rng.below(model.latency_max - model.latency_min + 1);
    Event ev;
    ev.time = now + latency;
    ev.kind = EventKind::Deliver;
    ev.round = msg.round;
    ev.sent_at = now;
    ev.envelope = std::move(msg);
    return ev;
}

std::optional<GroupConfig> form_group(std::span<const DeviceId> population, std::size_t size,
                                      SplitMix64& rng, const SuspicionLedger& ledger,
                                      GroupParams params) {
    if (size < 3) throw ContractError("form_group: size must be at least 3");
    std::vector<DeviceId> eligible;
    eligible.reserve(population.size());
    for (auto id : population)
        if (!ledger.excluded(id)) eligible.push_back(id);
    if (eligible.size() < size) return std::nullopt;

    for (std::size_t i = 0; i < size; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(eligible.size() - i));
        std::swap(eligible[i], eligible[j]);
    }
    eligible.resize(size);
    const auto quorum = params.quorum ? params.quorum : default_quorum(static_cast<std::uint32_t>(size) - 1);
    return GroupConfig{std::move(eligible), quorum, params.round_deadline,
                       params.first_round};
}

}  // namespace collabtrust
