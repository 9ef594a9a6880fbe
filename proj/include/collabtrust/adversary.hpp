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

#include <collabtrust/routine.hpp>
#include <collabtrust/splitmix.hpp>
#include <collabtrust/types.hpp>

#include <cstdint>
#include <map>
#include <set>
#include <string_view>

namespace collabtrust {

enum class Opinion : std::uint8_t { Agree, Disagree };
std::string_view to_string(Opinion o) noexcept;

enum class PayloadKind : std::uint8_t { Xor, Const, Complement };

struct Payload {
    PayloadKind kind = PayloadKind::Complement;
    std::uint64_t value = 0;  // XOR mask or CONST value; unused for COMPLEMENT

    std::uint64_t apply(std::uint64_t honest, Width width) const noexcept;
    friend bool operator==(const Payload&, const Payload&) = default;
};

/// Combinational trigger on one operand plus an output payload.
/// Fires when (ops[operand_index] & mask) == match.
struct TrojanModel {
    std::size_t operand_index = 0;
    std::uint64_t mask = 0;
    std::uint64_t match = 0;
    Payload payload;

    bool triggers(const OperandVector& ops) const noexcept;
    /// Throws ContractError when match has bits outside mask.
    void validate() const;

    friend bool operator==(const TrojanModel&, const TrojanModel&) = default;
};

enum class FaultKind : std::uint8_t { Honest, AlwaysWrong, Trojan };
enum class ReportingKind : std::uint8_t { Honest, Frame, Shield, Random };
enum class InitiatorKind : std::uint8_t { Honest, Evade };

std::string_view to_string(FaultKind k) noexcept;
std::string_view to_string(ReportingKind k) noexcept;
std::string_view to_string(InitiatorKind k) noexcept;

struct FaultModel {
    FaultKind kind = FaultKind::Honest;
    TrojanModel trojan;  // meaningful only for Trojan

    friend bool operator==(const FaultModel&, const FaultModel&) = default;
};

struct ReportingPolicy {
    ReportingKind kind = ReportingKind::Honest;
    std::set<DeviceId> targets;  // FRAME targets or SHIELD colluders
    double flip_probability = 0.0;

    friend bool operator==(const ReportingPolicy&, const ReportingPolicy&) = default;
};

struct InitiatorPolicy {
    InitiatorKind kind = InitiatorKind::Honest;
    std::set<DeviceId> colluders;

    friend bool operator==(const InitiatorPolicy&, const InitiatorPolicy&) = default;
};

/// Everything a compromised device may do differently from an honest one.
struct AdversaryProfile {
    FaultModel fault;
    ReportingPolicy reporting;
    InitiatorPolicy initiator;

    bool is_honest() const noexcept {
        return fault.kind == FaultKind::Honest && reporting.kind == ReportingKind::Honest &&
               initiator.kind == InitiatorKind::Honest;
    }
    bool is_corrupt() const noexcept { return fault.kind != FaultKind::Honest; }

    /// Throws ContractError if p is outside [0,1], a set names `self`,
    /// or the trojan is malformed.
    void validate(DeviceId self) const;

    friend bool operator==(const AdversaryProfile&, const AdversaryProfile&) = default;
};

/// Exact fraction num/den in lowest terms.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Output the device actually produces. op_count is preserved.
RoutineOutput apply_fault(const AdversaryProfile& profile, const RoutineSpec& spec,
                          const OperandVector& ops, const RoutineOutput& honest);

/// Fraction of W-bit operand values that fire the trigger: 2^-popcount(mask).
/// Throws ContractError when the model does not fit the routine.
Rational trigger_probability(const TrojanModel& model, const RoutineSpec& spec);

/// The opinion a device sends in place of what it actually observed.
/// Only RANDOM consumes from `rng`.
Opinion distort_opinion(const AdversaryProfile& profile, Opinion true_opinion, DeviceId checkee,
                        SplitMix64& rng);

/// An EVADE initiator colluding with `checkee` rewrites the inspected operand
/// so the checkee's trojan cannot fire. Every other case returns honest_ops.
OperandVector choose_adversarial_operands(const AdversaryProfile& profile,
                                          const OperandVector& honest_ops,
                                          const std::map<DeviceId, TrojanModel>& colluder_trojans,
                                          DeviceId checkee);

}  // namespace collabtrust
