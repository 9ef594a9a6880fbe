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

#include <collabtrust/protocol.hpp>
#include <collabtrust/splitmix.hpp>
#include <collabtrust/types.hpp>
#include <collabtrust/verdict.hpp>

#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <vector>

namespace collabtrust {

struct NetworkModel {
    Tick latency_min = 1;
    Tick latency_max = 3;
    double drop_prob = 0.0;
    std::uint64_t seed = 0;

    /// Throws ContractError unless 0 <= min <= max < deadline and
    /// drop_prob is in [0,1].
    void validate(Tick round_deadline) const;

    friend bool operator==(const NetworkModel&, const NetworkModel&) = default;
};

enum class EventKind : std::uint8_t { Deliver, RoundStart, RoundDeadline };

struct Event {
    Tick time = 0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::RoundStart;
    Round round = 0;
    Tick sent_at = 0;
    std::optional<Envelope> envelope;  // set for Deliver
};

/// Min-queue on (time, seq). schedule() stamps the next seq.
class EventQueue {
public:
    std::uint64_t schedule(Event ev);
    /// Empty optional signals the simulation is complete.
    std::optional<Event> pop();

    bool empty() const noexcept { return heap_.empty(); }
    std::size_t size() const noexcept { return heap_.size(); }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const noexcept {
            return a.time != b.time ? a.time > b.time : a.seq > b.seq;
        }
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_seq_ = 0;
};

/// Hands one unicast to the channel. Returns nothing when the channel drops
/// it, otherwise a Deliver event at now + uniform[latency_min, latency_max].
/// Throws ContractError when from == to.
std::optional<Event> send(Envelope msg, const NetworkModel& model, SplitMix64& rng, Tick now);

struct GroupParams {
    std::uint32_t quorum = 0;  // 0: majority of the checkers
    Tick round_deadline = 10;
    Round first_round = 0;
};

/// Ad-hoc group: a uniform subset of the non-excluded population, drawn by a
/// seeded Fisher-Yates prefix; member order is the shuffled order. Returns
/// nothing when fewer than `size` devices are eligible. Throws ContractError
/// for size < 3.
std::optional<GroupConfig> form_group(std::span<const DeviceId> population, std::size_t size,
                                      SplitMix64& rng, const SuspicionLedger& ledger,
                                      GroupParams params = {});

}  // namespace collabtrust
