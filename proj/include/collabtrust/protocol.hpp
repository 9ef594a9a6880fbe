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
#include <collabtrust/routine.hpp>
#include <collabtrust/splitmix.hpp>
#include <collabtrust/types.hpp>
#include <collabtrust/verdict.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace collabtrust {

struct Challenge {
    Round round = 0;
    DeviceId initiator;
    DeviceId checkee;
    std::uint32_t spec_id = 0;
    OperandVector ops;
    std::uint64_t challenge_id = 0;

    friend bool operator==(const Challenge&, const Challenge&) = default;
};

struct Response {
    std::uint64_t challenge_id = 0;
    DeviceId responder;
    std::uint64_t output = 0;

    friend bool operator==(const Response&, const Response&) = default;
};

struct ComparisonReport {
    std::uint64_t challenge_id = 0;
    DeviceId reporter;
    DeviceId checkee;
    Opinion opinion = Opinion::Agree;

    friend bool operator==(const ComparisonReport&, const ComparisonReport&) = default;
};

using Message = std::variant<Challenge, Response, ComparisonReport>;

std::string_view message_kind(const Message& m) noexcept;

/// One unicast. `round` is transport metadata used to discard stale traffic.
struct Envelope {
    DeviceId from;
    DeviceId to;
    Round round = 0;
    Message message;

    friend bool operator==(const Envelope&, const Envelope&) = default;
};

enum class Phase : std::uint8_t { Idle, AwaitResponse, AwaitReports };
std::string_view to_string(Phase p) noexcept;

/// Who checks whom in a given round. The checkee rotates through the member
/// list starting at the group's first round; the initiator is the member
/// right after the checkee; routines rotate through the catalog by round.
struct RoundSchedule {
    DeviceId checkee;
    DeviceId initiator;
    std::uint32_t spec_id = 0;
    std::uint64_t challenge_id = 0;
};

RoundSchedule schedule_round(const GroupConfig& group, Round round, std::size_t catalog_size);

/// Read-only context shared by every device of a run.
struct ProtocolEnv {
    std::span<const RoutineSpec> catalog;
    const std::map<DeviceId, TrojanModel>* colluder_trojans = nullptr;
    std::uint64_t shared_seed = 0;
};

enum class DropReason : std::uint8_t { None, Stale, Duplicate, Stray };

struct HandlerResult {
    std::vector<Envelope> outgoing;
    std::uint32_t ops_executed = 0;
    std::optional<Verdict> verdict;
    /// Why the handled message was discarded, if it was.
    DropReason dropped = DropReason::None;
    /// Held in the inbox until the round's challenge arrives.
    bool deferred = false;
    /// Discards among messages replayed from the inbox.
    std::uint32_t replay_stale = 0;
    std::uint32_t replay_duplicate = 0;
    std::uint32_t replay_stray = 0;
};

/// Per-device checking-round state machine. Handlers are transitions
/// (state, message) -> (state, outgoing messages); a Device is owned by a
/// single event loop.
class Device {
public:
    Device(DeviceId id, AdversaryProfile profile, std::uint64_t rng_seed);

    DeviceId id() const noexcept { return id_; }
    const AdversaryProfile& profile() const noexcept { return profile_; }
    Phase phase() const noexcept { return phase_; }
    bool in_group() const noexcept { return group_.has_value(); }
    const GroupConfig& group() const;
    Round current_round() const noexcept { return round_; }
    const RoundSchedule& schedule() const noexcept { return schedule_; }
    bool concluded() const noexcept { return concluded_; }
    std::optional<std::uint64_t> reference_output() const noexcept { return reference_; }

    /// Opinions this device has counted for the current checkee,
    /// including its own when it is a checker.
    std::uint32_t agree_count() const noexcept { return agree_; }
    std::uint32_t disagree_count() const noexcept { return disagree_; }
    std::uint32_t reports_counted() const noexcept {
        return static_cast<std::uint32_t>(reporters_.size());
    }

    void join_group(GroupConfig group);
    void leave_group() noexcept;

    /// Arms the device for `round`. Requires the previous round to be
    /// concluded (verdict emitted or timed out).
    void begin_round(Round round, std::size_t catalog_size);

    /// Initiator only: issue the round's challenge and compute the local
    /// reference output.
    HandlerResult on_round_start(Round round, const ProtocolEnv& env);

    HandlerResult handle_check_request(const Challenge& ch, Round round, const ProtocolEnv& env);
    HandlerResult handle_response(const Response& r, Round round);
    HandlerResult handle_report(const ComparisonReport& rep, DeviceId from, Round round);

    /// Inbox entry point. Responses and reports for the current round that
    /// arrive before its challenge are held and replayed, in arrival order,
    /// right after the challenge is accepted.
    HandlerResult receive(const Envelope& env, const ProtocolEnv& penv);

    /// Drops whatever is still held in the inbox; returns how many.
    std::size_t discard_deferred() noexcept;
    std::size_t deferred_count() const noexcept { return deferred_.size(); }

    /// Concludes from the partial tally; absent opinions count as MISSING.
    /// Throws ProtocolViolation if the device already concluded this round.
    Verdict on_timeout(Round round);

private:
    bool is_checker() const noexcept { return id_ != schedule_.checkee; }
    std::uint32_t n_checkers() const noexcept;
    Verdict conclude();
    void maybe_conclude(HandlerResult& out);
    void broadcast(HandlerResult& out, const Message& m) const;
    void count_opinion(DeviceId reporter, Opinion o);
    bool stale(Round round) const noexcept { return !armed_ || round != round_; }

    DeviceId id_;
    AdversaryProfile profile_;
    SplitMix64 rng_;
    std::optional<GroupConfig> group_;

    Round round_ = 0;
    bool armed_ = false;
    RoundSchedule schedule_;
    Phase phase_ = Phase::Idle;
    bool concluded_ = true;

    std::optional<Challenge> pending_;
    std::optional<std::uint64_t> reference_;
    bool own_opinion_formed_ = false;
    std::uint32_t agree_ = 0;
    std::uint32_t disagree_ = 0;
    std::set<DeviceId> reporters_;
    std::vector<Envelope> deferred_;
};

}  // namespace collabtrust
