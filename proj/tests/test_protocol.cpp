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

#include <collabtrust/error.hpp>
#include <collabtrust/protocol.hpp>

#include <doctest.h>

#include <deque>

using namespace collabtrust;

namespace {

GroupConfig make_group(std::uint32_t n, std::uint32_t quorum = 0) {
    GroupConfig g;
    for (std::uint32_t i = 0; i < n; ++i) g.members.push_back(DeviceId{i});
    g.quorum = quorum ? quorum : default_quorum(n - 1);
    return g;
}

struct RoundLog {
    std::size_t messages = 0;
    std::size_t challenges = 0, responses = 0, reports = 0;
    std::map<DeviceId, Verdict> verdicts;
    std::uint32_t ops = 0;
    std::uint32_t drops = 0;
};

// Synchronous group: messages are delivered FIFO, no loss.
struct Bench {
    std::vector<RoutineSpec> catalog = routine_catalog();
    std::map<DeviceId, TrojanModel> trojans;
    GroupConfig group;
    std::vector<Device> devices;
    ProtocolEnv env;

    explicit Bench(std::uint32_t n, std::map<DeviceId, AdversaryProfile> profiles = {},
                   std::uint64_t seed = 7)
        : group(make_group(n)) {
        for (const auto& [id, p] : profiles)
            if (p.fault.kind == FaultKind::Trojan) trojans.emplace(id, p.fault.trojan);
        for (std::uint32_t i = 0; i < n; ++i) {
            devices.emplace_back(DeviceId{i}, profiles[DeviceId{i}], 1000 + i);
            devices.back().join_group(group);
        }
        env = ProtocolEnv{catalog, &trojans, seed};
    }

    Device& dev(std::uint32_t i) { return devices[i]; }

    void begin(Round r) {
        for (auto& d : devices) d.begin_round(r, catalog.size());
    }


    RoundLog pump(std::deque<Envelope> queue, RoundLog acc = RoundLog{}) {
        while (!queue.empty()) {
            auto e = queue.front();
            queue.pop_front();
            ++acc.messages;
            switch (e.message.index()) {
                case 0: ++acc.challenges; break;
                case 1: ++acc.responses; break;
                default: ++acc.reports; break;
            }
            auto res = dev(e.to.value).receive(e, env);
            acc.ops += res.ops_executed;
            acc.drops += res.dropped != DropReason::None;
            if (res.verdict) {
                REQUIRE_FALSE(acc.verdicts.contains(e.to));
                acc.verdicts.emplace(e.to, *res.verdict);
            }
            for (auto& o : res.outgoing) queue.push_back(o);
        }
        return acc;
    }

    RoundLog run_round(Round r) {
        begin(r);
        const auto sched = schedule_round(group, r, catalog.size());
        auto start = dev(sched.initiator.value).on_round_start(r, env);
        RoundLog acc;
        acc.ops = start.ops_executed;
        return pump({start.outgoing.begin(), start.outgoing.end()}, acc);
    }
};

Challenge add_challenge(std::uint64_t a, std::uint64_t b) {
    // Round 0 of a 0..4 group: checkee 0, initiator 1, routine 0 (ADD).
    return Challenge{0, DeviceId{1}, DeviceId{0}, 0, OperandVector{{a, b}, Width::W8}, 0};
}

AdversaryProfile trojan_on_first_operand(std::uint64_t match) {
    AdversaryProfile p;
    p.fault = {FaultKind::Trojan, TrojanModel{0, 0xFF, match, {PayloadKind::Xor, 0x01}}};
    return p;
}

}  // namespace

TEST_CASE("schedule_round rotation") {
    const auto g = make_group(5);
    auto s = schedule_round(g, 0, 5);
    CHECK_EQ(s.checkee, DeviceId{0});
    CHECK_EQ(s.initiator, DeviceId{1});
    s = schedule_round(g, 1, 5);
    CHECK_EQ(s.checkee, DeviceId{1});
    CHECK_EQ(s.initiator, DeviceId{2});
    s = schedule_round(g, 4, 5);
    CHECK_EQ(s.checkee, DeviceId{4});
    CHECK_EQ(s.initiator, DeviceId{0});
    s = schedule_round(g, 5, 5);
    CHECK_EQ(s.checkee, DeviceId{0});
    CHECK_EQ(s.spec_id, 0);
    CHECK_EQ(schedule_round(g, 7, 5).spec_id, 2);

    auto later = g;
    later.first_round = 10;
    CHECK_EQ(schedule_round(later, 12, 5).checkee, DeviceId{2});
    CHECK_THROWS_AS(schedule_round(later, 3, 5), ContractError);
}

TEST_CASE("on_round_start") {
    Bench b(5);
    b.begin(0);
    auto res = b.dev(1).on_round_start(0, b.env);
    CHECK_EQ(res.outgoing.size(), 4);
    CHECK_EQ(res.ops_executed, 1);
    for (const auto& e : res.outgoing) {
        CHECK_EQ(e.from, DeviceId{1});
        CHECK_NE(e.to, DeviceId{1});
        const auto& ch = std::get<Challenge>(e.message);
        CHECK_EQ(ch.checkee, DeviceId{0});
        CHECK_EQ(ch.initiator, DeviceId{1});
        CHECK_EQ(ch.ops, generate_operands(7, 0, DeviceId{0}, b.catalog[0]));
    }
    CHECK_EQ(b.dev(1).phase(), Phase::AwaitResponse);

    SUBCASE("not the initiator") {
        CHECK_THROWS_AS(b.dev(2).on_round_start(0, b.env), ProtocolViolation);
    }
    SUBCASE("not idle") {
        CHECK_THROWS_AS(b.dev(1).on_round_start(0, b.env), ProtocolViolation);
    }
    SUBCASE("wrong round") {
        CHECK_THROWS_AS(b.dev(2).on_round_start(1, b.env), ProtocolViolation);
    }
}

TEST_CASE("begin_round requires the previous round to be concluded") {
    Bench b(3);
    b.begin(0);
    CHECK_THROWS_AS(b.dev(0).begin_round(1, 5), ProtocolViolation);
    b.dev(0).on_timeout(0);
    CHECK_NOTHROW(b.dev(0).begin_round(1, 5));
    CHECK_THROWS_AS(b.dev(1).join_group(b.group), ProtocolViolation);
}

TEST_CASE("handle_check_request") {
    SUBCASE("honest checkee answers every peer") {
        Bench b(5);
        b.begin(0);
        auto res = b.dev(0).handle_check_request(add_challenge(200, 100), 0, b.env);
        REQUIRE_EQ(res.outgoing.size(), 4);
        for (const auto& e : res.outgoing) CHECK_EQ(std::get<Response>(e.message).output, 44);
        CHECK_EQ(b.dev(0).phase(), Phase::AwaitReports);
    }
    SUBCASE("trojaned checkee with its trigger matched") {
        Bench b(5, {{DeviceId{0}, trojan_on_first_operand(200)}});
        b.begin(0);
        auto res = b.dev(0).handle_check_request(add_challenge(200, 100), 0, b.env);
        REQUIRE_EQ(res.outgoing.size(), 4);
        CHECK_EQ(std::get<Response>(res.outgoing[0].message).output, 45);
    }
    SUBCASE("honest checker stays quiet and caches its reference") {
        Bench b(5);
        b.begin(0);
        auto res = b.dev(3).handle_check_request(add_challenge(200, 100), 0, b.env);
        CHECK(res.outgoing.empty());
        CHECK_EQ(res.ops_executed, 1);
        CHECK_EQ(b.dev(3).reference_output(), std::optional<std::uint64_t>{44});
        CHECK_EQ(b.dev(3).phase(), Phase::AwaitResponse);
    }
    SUBCASE("stale, duplicate and mismatched challenges are dropped") {
        Bench b(5);
        b.begin(0);
        CHECK_EQ(b.dev(3).handle_check_request(add_challenge(1, 2), 1, b.env).dropped, DropReason::Stale);
        CHECK_EQ(b.dev(3).handle_check_request(add_challenge(1, 2), 0, b.env).dropped, DropReason::None);
        CHECK_EQ(b.dev(3).handle_check_request(add_challenge(1, 2), 0, b.env).dropped, DropReason::Duplicate);
        auto wrong = add_challenge(1, 2);
        wrong.checkee = DeviceId{2};
        CHECK_EQ(b.dev(4).handle_check_request(wrong, 0, b.env).dropped, DropReason::Stray);
        auto malformed = add_challenge(1, 2);
        malformed.ops.values.push_back(3);
        CHECK_EQ(b.dev(4).handle_check_request(malformed, 0, b.env).dropped, DropReason::Stray);
    }
}

TEST_CASE("handle_response") {
    const auto setup = [](Bench& b) {
        b.begin(0);
        b.dev(3).handle_check_request(add_challenge(200, 100), 0, b.env);
    };
    const auto opinions = [](const HandlerResult& res) {
        std::vector<Opinion> out;
        for (const auto& e : res.outgoing) out.push_back(std::get<ComparisonReport>(e.message).opinion);
        return out;
    };

    SUBCASE("matching output: AGREE to every peer") {
        Bench b(5);
        setup(b);
        auto res = b.dev(3).handle_response(Response{0, DeviceId{0}, 44}, 0);
        CHECK_EQ(opinions(res), std::vector<Opinion>(4, Opinion::Agree));
        CHECK_EQ(b.dev(3).phase(), Phase::AwaitReports);
        CHECK_EQ(b.dev(3).reports_counted(), 1);
    }
    SUBCASE("mismatch: DISAGREE") {
        Bench b(5);
        setup(b);
        auto res = b.dev(3).handle_response(Response{0, DeviceId{0}, 45}, 0);
        CHECK_EQ(opinions(res), std::vector<Opinion>(4, Opinion::Disagree));
    }
    SUBCASE("framing reporter lies") {
        AdversaryProfile framer;
        framer.reporting = {ReportingKind::Frame, {DeviceId{0}}, 0.0};
        Bench b(5, {{DeviceId{3}, framer}});
        setup(b);
        auto res = b.dev(3).handle_response(Response{0, DeviceId{0}, 44}, 0);
        CHECK_EQ(opinions(res), std::vector<Opinion>(4, Opinion::Disagree));
        CHECK_EQ(b.dev(3).disagree_count(), 1);
    }
    SUBCASE("unknown challenge and duplicates") {
        Bench b(5);
        setup(b);
        CHECK_EQ(b.dev(3).handle_response(Response{9, DeviceId{0}, 44}, 0).dropped, DropReason::Stray);
        CHECK_EQ(b.dev(3).handle_response(Response{0, DeviceId{2}, 44}, 0).dropped, DropReason::Stray);
        CHECK_EQ(b.dev(2).handle_response(Response{0, DeviceId{0}, 44}, 0).dropped, DropReason::Stray);
        CHECK_EQ(b.dev(3).handle_response(Response{0, DeviceId{0}, 44}, 0).dropped, DropReason::None);
        CHECK_EQ(b.dev(3).handle_response(Response{0, DeviceId{0}, 44}, 0).dropped, DropReason::Duplicate);
        CHECK_EQ(b.dev(3).reports_counted(), 1);
    }
}

TEST_CASE("handle_report and verdicts") {
    SUBCASE("honest round: every device concludes TRUSTED") {
        Bench b(5);
        const auto out = b.run_round(0);
        REQUIRE_EQ(out.verdicts.size(), 5);
        for (const auto& [id, v] : out.verdicts) {
            CHECK_EQ(v.outcome, Outcome::Trusted);
            CHECK_EQ(v.tally, Tally{4, 0, 0, 4});
            CHECK_EQ(v.checkee, DeviceId{0});
        }
    }
    SUBCASE("manifesting checkee is FLAGGED by everyone") {
        AdversaryProfile wrong;
        wrong.fault.kind = FaultKind::AlwaysWrong;
        Bench b(5, {{DeviceId{0}, wrong}});
        const auto out = b.run_round(0);
        REQUIRE_EQ(out.verdicts.size(), 5);
        for (const auto& [id, v] : out.verdicts) {
            CHECK_EQ(v.outcome, Outcome::Flagged);
            CHECK_EQ(v.tally, Tally{0, 4, 0, 4});
        }
    }
    SUBCASE("two of four reports, then timeout: INCONCLUSIVE") {
        Bench b(5);
        b.begin(0);
        auto& checkee = b.dev(0);
        checkee.handle_check_request(add_challenge(1, 1), 0, b.env);
        for (std::uint32_t r : {1u, 2u}) {
            const auto res = checkee.handle_report(ComparisonReport{0, DeviceId{r}, DeviceId{0}, Opinion::Agree},
                                                   DeviceId{r}, 0);
            CHECK_FALSE(res.verdict);
        }
        const auto v = checkee.on_timeout(0);
        CHECK_EQ(v.tally, Tally{2, 0, 2, 4});
        CHECK_EQ(v.outcome, Outcome::Inconclusive);
        CHECK_EQ(checkee.phase(), Phase::Idle);
        CHECK_THROWS_AS(checkee.on_timeout(0), ProtocolViolation);
    }
    SUBCASE("report filtering") {
        Bench b(5);
        b.begin(0);
        auto& d = b.dev(0);
        const ComparisonReport early{0, DeviceId{2}, DeviceId{0}, Opinion::Agree};
        CHECK_EQ(d.handle_report(early, DeviceId{2}, 0).dropped, DropReason::Stray);  // no challenge yet
        d.handle_check_request(add_challenge(1, 1), 0, b.env);
        CHECK_EQ(d.handle_report(ComparisonReport{0, DeviceId{9}, DeviceId{0}, Opinion::Agree}, DeviceId{9}, 0).dropped,
                 DropReason::Stray);
        CHECK_EQ(d.handle_report(early, DeviceId{3}, 0).dropped, DropReason::Stray);  // spoofed reporter
        CHECK_EQ(d.handle_report(early, DeviceId{2}, 1).dropped, DropReason::Stale);
        CHECK_EQ(d.handle_report(early, DeviceId{2}, 0).dropped, DropReason::None);
        CHECK_EQ(d.handle_report(early, DeviceId{2}, 0).dropped, DropReason::Duplicate);
        CHECK_EQ(d.reports_counted(), 1);
    }
}

TEST_CASE("on_timeout tallies") {
    // Drive a checker to a given partial tally: its own opinion plus reports.
    const auto partial = [](std::vector<Opinion> others, Opinion own) {
        Bench b(5);
        b.begin(0);
        auto& d = b.dev(3);
        d.handle_check_request(add_challenge(200, 100), 0, b.env);
        d.handle_response(Response{0, DeviceId{0}, own == Opinion::Agree ? 44u : 45u}, 0);
        std::uint32_t from = 1;
        for (auto o : others) {
            if (from == 3) ++from;
            d.handle_report(ComparisonReport{0, DeviceId{from}, DeviceId{0}, o}, DeviceId{from}, 0);
            ++from;
        }
        return d.on_timeout(0);
    };
    auto v = partial({Opinion::Disagree, Opinion::Disagree}, Opinion::Disagree);
    CHECK_EQ(v.tally, Tally{0, 3, 1, 4});
    CHECK_EQ(v.outcome, Outcome::Flagged);
    v = partial({Opinion::Agree, Opinion::Agree}, Opinion::Agree);
    CHECK_EQ(v.tally, Tally{3, 0, 1, 4});
    CHECK_EQ(v.outcome, Outcome::Trusted);
}

TEST_CASE("early responses and reports wait in the inbox for the challenge") {
    Bench b(5);
    b.begin(0);
    auto& d = b.dev(3);
    auto r1 = d.receive(Envelope{DeviceId{0}, DeviceId{3}, 0, Response{0, DeviceId{0}, 44}}, b.env);
    CHECK(r1.deferred);
    auto r2 = d.receive(Envelope{DeviceId{2}, DeviceId{3}, 0,
                                 ComparisonReport{0, DeviceId{2}, DeviceId{0}, Opinion::Agree}},
                        b.env);
    CHECK(r2.deferred);
    CHECK_EQ(d.deferred_count(), 2);
    CHECK_EQ(d.phase(), Phase::Idle);

    auto res = d.receive(Envelope{DeviceId{1}, DeviceId{3}, 0, add_challenge(200, 100)}, b.env);
    CHECK_EQ(d.deferred_count(), 0);
    CHECK_EQ(res.outgoing.size(), 4);  // its own report, formed from the replayed response
    CHECK_EQ(d.reports_counted(), 2);
    CHECK_EQ(d.phase(), Phase::AwaitReports);

    SUBCASE("held messages are discarded if the challenge never comes") {
        Bench c(5);
        c.begin(0);
        c.dev(4).receive(Envelope{DeviceId{0}, DeviceId{4}, 0, Response{0, DeviceId{0}, 44}}, c.env);
        CHECK_EQ(c.dev(4).discard_deferred(), 1);
        CHECK_EQ(c.dev(4).on_timeout(0).tally.missing, 4);
    }
}

TEST_CASE("lossless round: message conservation, liveness and self-consistency") {
    for (std::uint32_t n = 3; n <= 7; ++n) {
        CAPTURE(n);
        Bench b(n, {}, 100 + n);
        for (Round r = 0; r < 2 * n; ++r) {
            const auto out = b.run_round(r);
            CHECK_EQ(out.messages, (n - 1) + (n - 1) + (n - 1) * (n - 1));
            CHECK_EQ(out.challenges, n - 1);
            CHECK_EQ(out.responses, n - 1);
            CHECK_EQ(out.reports, (n - 1) * (n - 1));
            CHECK_EQ(out.drops, 0);
            REQUIRE_EQ(out.verdicts.size(), n);
            for (const auto& [id, v] : out.verdicts) {
                CHECK_EQ(v, out.verdicts.begin()->second);
                CHECK_EQ(v.outcome, Outcome::Trusted);
            }
            for (auto& d : b.devices) {
                CHECK(d.concluded());
                CHECK_EQ(d.phase(), Phase::Idle);
                CHECK_EQ(d.reports_counted(), n - 1);
            }
        }
    }
}

TEST_CASE("protocol drives every group member through the phases in order") {
    Bench b(4);
    b.begin(0);
    for (auto& d : b.devices) CHECK_EQ(d.phase(), Phase::Idle);
    auto start = b.dev(1).on_round_start(0, b.env);
    CHECK_EQ(b.dev(1).phase(), Phase::AwaitResponse);
    // Deliver the challenge to the two plain checkers first.
    for (const auto& e : start.outgoing)
        if (e.to != DeviceId{0}) {
            b.dev(e.to.value).receive(e, b.env);
            CHECK_EQ(b.dev(e.to.value).phase(), Phase::AwaitResponse);
        }
    for (const auto& e : start.outgoing)
        if (e.to == DeviceId{0}) {
            auto res = b.dev(0).receive(e, b.env);
            CHECK_EQ(b.dev(0).phase(), Phase::AwaitReports);
            auto out = b.pump({res.outgoing.begin(), res.outgoing.end()});
            CHECK_EQ(out.verdicts.size(), 4);
        }
    for (auto& d : b.devices) CHECK_EQ(d.phase(), Phase::Idle);
}

TEST_CASE("receive rejects misaddressed envelopes") {
    Bench b(3);
    b.begin(0);
    CHECK_THROWS_AS(b.dev(0).receive(Envelope{DeviceId{1}, DeviceId{2}, 0, Response{}}, b.env),
                    ProtocolViolation);
}
