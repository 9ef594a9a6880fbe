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

#include <collabtrust/protocol.hpp>

#include <collabtrust/error.hpp>

#include <string>

namespace collabtrust {

std::string_view message_kind(const Message& m) noexcept {
    switch (m.index()) {
        case 0: return "CHALLENGE";
        case 1: return "RESPONSE";
        case 2: return "REPORT";
    }
    return "?";
}

std::string_view to_string(Phase p) noexcept {
    switch (p) {
        case Phase::Idle: return "IDLE";
        case Phase::AwaitResponse: return "AWAIT_RESPONSE";
        case Phase::AwaitReports: return "AWAIT_REPORTS";
    }
    return "?";
}

RoundSchedule schedule_round(const GroupConfig& group, Round round, std::size_t catalog_size) {
    if (group.members.empty()) throw ContractError("schedule_round: empty group");
    if (catalog_size == 0) throw ContractError("schedule_round: empty routine catalog");
    if (round < group.first_round) throw ContractError("schedule_round: round precedes the group");
    const std::size_t n = group.members.size();
    const std::size_t pos = static_cast<std::size_t>((round - group.first_round) % n);
    return RoundSchedule{
        group.members[pos],
        group.members[(pos + 1) % n],
        static_cast<std::uint32_t>(round % catalog_size),
        round,
    };
}

Device::Device(DeviceId id, AdversaryProfile profile, std::uint64_t rng_seed)
    : id_(id), profile_(std::move(profile)), rng_(rng_seed) {}

const GroupConfig& Device::group() const {
    if (!group_) throw ProtocolViolation("device " + std::to_string(id_.value) + " has no group");
    return *group_;
}

void Device::join_group(GroupConfig group) {
    if (!concluded_)
        throw ProtocolViolation("device " + std::to_string(id_.value) + " regrouped mid-round");
    if (!group.contains(id_))
        throw ProtocolViolation("device " + std::to_string(id_.value) + " is not a member");
    group_ = std::move(group);
    armed_ = false;
    phase_ = Phase::Idle;
}

void Device::leave_group() noexcept {
    group_.reset();
    armed_ = false;
    concluded_ = true;
    phase_ = Phase::Idle;
    pending_.reset();
    reference_.reset();
    deferred_.clear();
}

void Device::begin_round(Round round, std::size_t catalog_size) {
    if (!group_)
        throw ProtocolViolation("device " + std::to_string(id_.value) + " started a round without a group");
    if (!concluded_)
        throw ProtocolViolation("device " + std::to_string(id_.value) + " started round " +
                                std::to_string(round) + " before concluding round " +
                                std::to_string(round_));
    round_ = round;
    schedule_ = schedule_round(*group_, round, catalog_size);
    armed_ = true;
    concluded_ = false;
    phase_ = Phase::Idle;
    pending_.reset();
    reference_.reset();
    own_opinion_formed_ = false;
    agree_ = 0;
    disagree_ = 0;
    reporters_.clear();
    deferred_.clear();
}

std::uint32_t Device::n_checkers() const noexcept {
    return static_cast<std::uint32_t>(group_->members.size() - 1);
}

void Device::broadcast(HandlerResult& out, const Message& m) const {
    for (auto peer : group_->members)
        if (peer != id_) out.outgoing.push_back(Envelope{id_, peer, round_, m});
}

void Device::count_opinion(DeviceId reporter, Opinion o) {
    reporters_.insert(reporter);
    (o == Opinion::Agree ? agree_ : disagree_) += 1;
}

Verdict Device::conclude() {
    const auto tally = Tally::from_received(agree_, disagree_, n_checkers());
    concluded_ = true;
    phase_ = Phase::Idle;
    return Verdict{schedule_.checkee, round_, compute_verdict(tally, group_->quorum), tally};
}

void Device::maybe_conclude(HandlerResult& out) {
    if (!concluded_ && reporters_.size() == n_checkers()) out.verdict = conclude();
}

HandlerResult Device::on_round_start(Round round, const ProtocolEnv& env) {
    if (stale(round) || concluded_)
        throw ProtocolViolation("on_round_start for round " + std::to_string(round) +
                                " on a device armed for round " + std::to_string(round_));
    if (id_ != schedule_.initiator)
        throw ProtocolViolation("device " + std::to_string(id_.value) +
                                " is not the initiator of round " + std::to_string(round));
    if (phase_ != Phase::Idle || pending_)
        throw ProtocolViolation("initiator " + std::to_string(id_.value) + " is not idle");
    if (schedule_.spec_id >= env.catalog.size())
        throw ProtocolViolation("scheduled routine missing from catalog");

    const auto& spec = env.catalog[schedule_.spec_id];
    auto ops = generate_operands(env.shared_seed, round, schedule_.checkee, spec);
    if (env.colluder_trojans != nullptr)
        ops = choose_adversarial_operands(profile_, ops, *env.colluder_trojans, schedule_.checkee);

    Challenge ch{round, id_, schedule_.checkee, spec.id, std::move(ops), schedule_.challenge_id};
    const auto out_value = apply_fault(profile_, spec, ch.ops, execute(spec, ch.ops));

    HandlerResult out;
    out.ops_executed = out_value.op_count;
    reference_ = out_value.value;
    broadcast(out, ch);
    pending_ = std::move(ch);
    phase_ = Phase::AwaitResponse;
    return out;
}

HandlerResult Device::handle_check_request(const Challenge& ch, Round round,
                                           const ProtocolEnv& env) {
    HandlerResult out;
    if (stale(round) || concluded_ || ch.round != round_) {
        out.dropped = DropReason::Stale;
        return out;
    }
    if (pending_) {
        out.dropped = pending_->challenge_id == ch.challenge_id ? DropReason::Duplicate
                                                                : DropReason::Stray;
        return out;
    }
    if (ch.challenge_id != schedule_.challenge_id || ch.checkee != schedule_.checkee ||
        ch.initiator != schedule_.initiator || ch.initiator == id_ ||
        ch.spec_id >= env.catalog.size() || env.catalog[ch.spec_id].id != ch.spec_id) {
        out.dropped = DropReason::Stray;
        return out;
    }

    const auto& spec = env.catalog[ch.spec_id];
    RoutineOutput honest;
    try {
        honest = execute(spec, ch.ops);
    } catch (const ContractError&) {
        out.dropped = DropReason::Stray;
        return out;
    }
    const auto mine = apply_fault(profile_, spec, ch.ops, honest);
    out.ops_executed = mine.op_count;
    reference_ = mine.value;
    pending_ = ch;
    phase_ = Phase::AwaitResponse;

    if (id_ == schedule_.checkee) {
        broadcast(out, Response{ch.challenge_id, id_, mine.value});
        phase_ = Phase::AwaitReports;
    }
    return out;
}

HandlerResult Device::handle_response(const Response& r, Round round) {
    HandlerResult out;
    if (stale(round) || concluded_) {
        out.dropped = DropReason::Stale;
        return out;
    }
    if (!pending_ || r.challenge_id != pending_->challenge_id || !is_checker() ||
        r.responder != schedule_.checkee) {
        out.dropped = DropReason::Stray;
        return out;
    }
    if (own_opinion_formed_) {
        out.dropped = DropReason::Duplicate;
        return out;
    }

    const Opinion observed = r.output == *reference_ ? Opinion::Agree : Opinion::Disagree;
    const Opinion sent = distort_opinion(profile_, observed, schedule_.checkee, rng_);
    own_opinion_formed_ = true;
    count_opinion(id_, sent);
    broadcast(out, ComparisonReport{r.challenge_id, id_, schedule_.checkee, sent});
    phase_ = Phase::AwaitReports;
    maybe_conclude(out);
    return out;
}

HandlerResult Device::handle_report(const ComparisonReport& rep, DeviceId from, Round round) {
    HandlerResult out;
    if (stale(round) || concluded_) {
        out.dropped = DropReason::Stale;
        return out;
    }
    if (from != rep.reporter || !group_->contains(from) || from == id_ ||
        from == schedule_.checkee || !pending_ || rep.challenge_id != pending_->challenge_id ||
        rep.checkee != schedule_.checkee) {
        out.dropped = DropReason::Stray;
        return out;
    }
    if (reporters_.contains(from)) {
        out.dropped = DropReason::Duplicate;
        return out;
    }
    count_opinion(from, rep.opinion);
    maybe_conclude(out);
    return out;
}

HandlerResult Device::receive(const Envelope& env, const ProtocolEnv& penv) {
    if (env.to != id_)
        throw ProtocolViolation("envelope for device " + std::to_string(env.to.value) +
                                " delivered to device " + std::to_string(id_.value));

    const bool early = !stale(env.round) && !concluded_ && !pending_;
    if (const auto* ch = std::get_if<Challenge>(&env.message)) {
        auto out = handle_check_request(*ch, env.round, penv);
        if (out.dropped != DropReason::None) return out;

        auto held = std::move(deferred_);
        deferred_.clear();
        for (const auto& e : held) {
            auto r = receive(e, penv);
            out.outgoing.insert(out.outgoing.end(), r.outgoing.begin(), r.outgoing.end());
            out.ops_executed += r.ops_executed;
            if (r.verdict) out.verdict = r.verdict;
            out.replay_stale += r.replay_stale + (r.dropped == DropReason::Stale);
            out.replay_duplicate += r.replay_duplicate + (r.dropped == DropReason::Duplicate);
            out.replay_stray += r.replay_stray + (r.dropped == DropReason::Stray);
        }
        return out;
    }

    if (early) {
        deferred_.push_back(env);
        HandlerResult out;
        out.deferred = true;
        return out;
    }
    if (const auto* r = std::get_if<Response>(&env.message)) return handle_response(*r, env.round);
    return handle_report(std::get<ComparisonReport>(env.message), env.from, env.round);
}

std::size_t Device::discard_deferred() noexcept {
    const auto n = deferred_.size();
    deferred_.clear();
    return n;
}

Verdict Device::on_timeout(Round round) {
    if (stale(round))
        throw ProtocolViolation("timeout for round " + std::to_string(round) +
                                " on a device armed for round " + std::to_string(round_));
    if (concluded_)
        throw ProtocolViolation("device " + std::to_string(id_.value) +
                                " already concluded round " + std::to_string(round));
    deferred_.clear();
    return conclude();
}

}  // namespace collabtrust
