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

#include <collabtrust/simulator.hpp>

#include <collabtrust/error.hpp>
#include <collabtrust/protocol.hpp>
#include <collabtrust/simnet.hpp>
#include <collabtrust/splitmix.hpp>

#include <algorithm>
#include <future>
#include <sstream>
#include <string>
#include <thread>

namespace collabtrust {
namespace {

std::string join_ids(const std::vector<DeviceId>& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(ids[i].value);
    }
    return s;
}

std::string join_values(const std::vector<std::uint64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

std::string payload_fields(const Envelope& e) {
    std::ostringstream os;
    os << "kind=" << message_kind(e.message) << " round=" << e.round;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Challenge>) {
                os << " id=" << m.challenge_id << " initiator=" << m.initiator
                   << " checkee=" << m.checkee << " routine=" << m.spec_id
                   << " ops=" << join_values(m.ops.values);
            } else if constexpr (std::is_same_v<T, Response>) {
                os << " id=" << m.challenge_id << " responder=" << m.responder
                   << " output=" << m.output;
            } else {
                os << " id=" << m.challenge_id << " reporter=" << m.reporter
                   << " checkee=" << m.checkee << " opinion=" << to_string(m.opinion);
            }
        },
        e.message);
    return os.str();
}

// Line-oriented event log: time seq kind from to payload.
class TraceWriter {
public:
    explicit TraceWriter(std::ostream* out) : out_(out) {}

    bool enabled() const noexcept { return out_ != nullptr; }

    template <class From, class To>
    void line(Tick time, std::uint64_t seq, std::string_view kind, From from, To to,
              const std::string& payload) {
        if (!out_) return;
        *out_ << time << ' ' << seq << ' ' << kind << ' ' << from << ' ' << to;
        if (!payload.empty()) *out_ << ' ' << payload;
        *out_ << '\n';
    }

private:
    std::ostream* out_;
};

constexpr std::string_view kNone = "-";

class Simulation {
public:
    Simulation(const Scenario& sc, std::uint64_t seed, std::ostream* trace)
        : sc_(sc),
          seed_(seed),
          profiles_(sc.all_profiles()),
          trojans_(sc.trojans()),
          population_(sc.population_ids()),
          network_(sc.network),
          grouping_rng_(stream_seed(seed, kGroupingStreamSalt)),
          energy_(sc.energy),
          ledger_(sc.flag_threshold),
          trace_(trace) {
        network_.seed = stream_seed(seed, kNetworkStreamSalt);
        network_rng_ = SplitMix64(network_.seed);
        devices_.reserve(population_.size());
        for (auto id : population_)
            devices_.emplace_back(id, profiles_.at(id), device_stream_seed(seed, id.value));
        env_ = ProtocolEnv{sc_.routines, &trojans_, seed_};
    }

    RunResult run() {
        if (sc_.rounds > 0) queue_.schedule(Event{0, 0, EventKind::RoundStart, 0, 0, {}});
        bool done = sc_.rounds == 0;
        while (!done) {
            auto ev = queue_.pop();
            if (!ev) break;
            now_ = ev->time;
            seq_ = ev->seq;
            switch (ev->kind) {
                case EventKind::RoundStart: done = !start_round(ev->round); break;
                case EventKind::Deliver: deliver(*ev); break;
                case EventKind::RoundDeadline: done = !end_round(ev->round); break;
            }
        }
        while (auto ev = queue_.pop())
            if (ev->kind == EventKind::Deliver) ++report_.messages_in_flight;
        return finish();
    }

private:
    Device& device(DeviceId id) { return devices_[id.value]; }

    bool start_round(Round r) {
        bool regroup = !group_;
        if (group_ && sc_.regroup_period > 0 && r > group_->first_round &&
            (r - group_->first_round) % sc_.regroup_period == 0)
            regroup = true;
        if (group_)
            for (auto m : group_->members)
                if (ledger_.excluded(m)) regroup = true;

        if (regroup) {
            if (group_)
                for (auto m : group_->members) device(m).leave_group();
            group_ = form_group(population_, sc_.group_size, grouping_rng_, ledger_,
                                GroupParams{sc_.quorum, sc_.round_deadline, r});
            if (!group_) {
                std::size_t eligible = 0;
                for (auto id : population_) eligible += !ledger_.excluded(id);
                report_.halted_runs = 1;
                report_.halt_reason = "round " + std::to_string(r) + ": only " +
                                      std::to_string(eligible) + " eligible devices for a group of " +
                                      std::to_string(sc_.group_size);
                trace_.line(now_, seq_, "HALT", kNone, kNone,
                            "round=" + std::to_string(r) + " eligible=" + std::to_string(eligible));
                return false;
            }
            for (auto m : group_->members) device(m).join_group(*group_);
            trace_.line(now_, seq_, "GROUP", kNone, kNone,
                        "first_round=" + std::to_string(r) + " members=" + join_ids(group_->members));
        }

        round_ = r;
        round_open_ = true;
        round_verdicts_.clear();
        for (auto m : group_->members) {
            first_participation_.try_emplace(m, r);
            device(m).begin_round(r, sc_.routines.size());
        }
        result_.round_members.push_back(group_->members);
        const auto sched = schedule_round(*group_, r, sc_.routines.size());
        trace_.line(now_, seq_, "ROUND_START", kNone, kNone,
                    "round=" + std::to_string(r) + " checkee=" + std::to_string(sched.checkee.value) +
                        " initiator=" + std::to_string(sched.initiator.value) +
                        " routine=" + std::to_string(sched.spec_id));
        queue_.schedule(Event{now_ + sc_.round_deadline, 0, EventKind::RoundDeadline, r, now_, {}});
        process(device(sched.initiator).on_round_start(r, env_), sched.initiator);
        return true;
    }

    void deliver(const Event& ev) {
        const auto& e = *ev.envelope;
        energy_.account(Reception{e.to});
        ++report_.messages_delivered;

        if (!round_open_ || e.round != round_ || !group_->contains(e.to)) {
            ++report_.messages_late;
            trace_.line(now_, seq_, "LATE", e.from, e.to, payload_fields(e));
            return;
        }
        trace_.line(now_, seq_, "DELIVER", e.from, e.to,
                    payload_fields(e) + " sent=" + std::to_string(ev.sent_at));
        process(device(e.to).receive(e, env_), e.to);
    }

    bool end_round(Round r) {
        round_open_ = false;
        for (auto m : group_->members) {
            auto& d = device(m);
            if (d.concluded()) continue;
            report_.messages_stray += d.discard_deferred();
            record_verdict(m, d.on_timeout(r), true);
        }
        trace_.line(now_, seq_, "ROUND_DEADLINE", kNone, kNone, "round=" + std::to_string(r));

        if (auto action = group_action()) {
            const bool was_excluded = ledger_.excluded(action->checkee);
            ledger_.record(*action);
            trace_.line(now_, seq_, "ACTION", kNone, action->checkee,
                        "round=" + std::to_string(r) + " outcome=" +
                            std::string(to_string(action->outcome)) +
                            " flags=" + std::to_string(ledger_.flags(action->checkee)));
            if (!was_excluded && ledger_.excluded(action->checkee))
                trace_.line(now_, seq_, "EXCLUDE", kNone, action->checkee,
                            "round=" + std::to_string(r));
        }

        ++report_.rounds_executed;
        if (r + 1 >= sc_.rounds) return false;
        queue_.schedule(Event{now_, 0, EventKind::RoundStart, r + 1, now_, {}});
        return true;
    }

    // The verdict acted on for the round: what the fully honest devices
    // concluded (FLAGGED if any of them flagged). Falls back to every
    // member's verdict when the group has no fully honest device.
    std::optional<Verdict> group_action() const {
        std::optional<Verdict> flagged, trusted, inconclusive;
        bool any_honest = false;
        for (const auto& rec : round_verdicts_) any_honest |= profiles_.at(rec.device).is_honest();
        for (const auto& rec : round_verdicts_) {
            if (any_honest && !profiles_.at(rec.device).is_honest()) continue;
            auto& slot = rec.verdict.outcome == Outcome::Flagged   ? flagged
                         : rec.verdict.outcome == Outcome::Trusted ? trusted
                                                                   : inconclusive;
            if (!slot) slot = rec.verdict;
        }
        if (flagged) return flagged;
        if (trusted) return trusted;
        return inconclusive;
    }

    void record_verdict(DeviceId who, const Verdict& v, bool timeout) {
        round_verdicts_.push_back({who, v});
        result_.verdicts.push_back({who, v});
        trace_.line(now_, seq_, "VERDICT", who, kNone,
                    "round=" + std::to_string(v.round) +
                        " checkee=" + std::to_string(v.checkee.value) +
                        " outcome=" + std::string(to_string(v.outcome)) +
                        " agree=" + std::to_string(v.tally.agree) +
                        " disagree=" + std::to_string(v.tally.disagree) +
                        " missing=" + std::to_string(v.tally.missing) +
                        " timeout=" + (timeout ? "1" : "0"));
    }

    void process(HandlerResult res, DeviceId actor) {
        if (res.ops_executed > 0) energy_.account(Execution{actor, res.ops_executed});
        switch (res.dropped) {
            case DropReason::None: break;
            case DropReason::Stale: ++report_.messages_late; break;
            case DropReason::Duplicate:
            case DropReason::Stray: ++report_.messages_stray; break;
        }
        report_.messages_late += res.replay_stale;
        report_.messages_stray += res.replay_duplicate + res.replay_stray;
        if (res.verdict) record_verdict(actor, *res.verdict, false);

        for (auto& out : res.outgoing) {
            energy_.account(Transmission{out.from});
            ++report_.messages_sent;
            const auto from = out.from;
            const auto to = out.to;
            const std::string fields = trace_.enabled() ? payload_fields(out) : std::string{};
            if (auto ev = send(std::move(out), network_, network_rng_, now_)) {
                queue_.schedule(std::move(*ev));
            } else {
                ++report_.messages_dropped;
                trace_.line(now_, seq_, "DROP", from, to, fields);
            }
        }
    }

    RunResult finish() {
        report_.repetitions = 1;
        const auto summary = detection_stats(result_.verdicts, profiles_);
        report_.verdicts = result_.verdicts.size();
        report_.trusted = summary.trusted;
        report_.flagged = summary.flagged;
        report_.inconclusive = summary.inconclusive;
        report_.false_positives = summary.false_positives;
        report_.energy_total = energy_.total();

        for (auto id : population_) {
            const auto c = energy_.counters(id);
            DeviceStats d;
            d.id = id;
            d.energy = energy_.energy(id);
            d.ops = c.ops;
            d.sent = c.sent;
            d.received = c.received;
            d.flags = ledger_.flags(id);
            if (const auto* e = ledger_.find(id)) d.excluded_round = e->excluded_round;
            if (auto it = summary.first_flag_round.find(id); it != summary.first_flag_round.end())
                d.detection_round = it->second;
            report_.devices.push_back(d);

            if (!profiles_.at(id).is_corrupt()) continue;
            DetectionStat det;
            det.device = id;
            if (d.detection_round) {
                det.detected_runs = 1;
                det.first_detection_round = d.detection_round;
                det.latency_sum = *d.detection_round - first_participation_.at(id);
            }
            report_.detections.push_back(det);
        }
        result_.report = std::move(report_);
        return std::move(result_);
    }

    const Scenario& sc_;
    std::uint64_t seed_;
    std::map<DeviceId, AdversaryProfile> profiles_;
    std::map<DeviceId, TrojanModel> trojans_;
    std::vector<DeviceId> population_;
    NetworkModel network_;
    SplitMix64 network_rng_;
    SplitMix64 grouping_rng_;
    EnergyLedger energy_;
    SuspicionLedger ledger_;
    TraceWriter trace_;
    std::vector<Device> devices_;
    ProtocolEnv env_;

    EventQueue queue_;
    Tick now_ = 0;
    std::uint64_t seq_ = 0;
    Round round_ = 0;
    bool round_open_ = false;
    std::optional<GroupConfig> group_;
    std::vector<VerdictRecord> round_verdicts_;
    std::map<DeviceId, Round> first_participation_;
    SimReport report_;
    RunResult result_;
};

}  // namespace

RunResult run_simulation(const Scenario& scenario, std::uint64_t seed, std::ostream* trace) {
    scenario.validate();
    return Simulation(scenario, seed, trace).run();
}

SimReport run_repetitions(const Scenario& scenario, std::ostream* trace) {
    scenario.validate();
    const std::uint32_t reps = scenario.repetitions;
    std::vector<SimReport> reports(reps);

    if (trace != nullptr || reps == 1) {
        for (std::uint32_t k = 0; k < reps; ++k) {
            const auto seed = scenario.seed + k;
            if (trace != nullptr && reps > 1)
                *trace << "# repetition " << k << " seed " << seed << '\n';
            reports[k] = run_simulation(scenario, seed, trace).report;
        }
    } else {
        // Independent runs; merged below in repetition order.
        const std::uint32_t workers =
            std::max(1u, std::min(reps, std::thread::hardware_concurrency()));
        std::vector<std::future<void>> jobs;
        for (std::uint32_t w = 0; w < workers; ++w)
            jobs.push_back(std::async(std::launch::async, [&, w] {
                for (std::uint32_t k = w; k < reps; k += workers)
                    reports[k] = run_simulation(scenario, scenario.seed + k).report;
            }));
        for (auto& j : jobs) j.get();
    }

    SimReport merged;
    for (const auto& r : reports) merge_into(merged, r);
    return merged;
}

}  // namespace collabtrust
