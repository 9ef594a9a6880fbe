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

#include <collabtrust/adversary.hpp>

#include <collabtrust/error.hpp>

#include <bit>
#include <string>

namespace collabtrust {

std::string_view to_string(Opinion o) noexcept {
    return o == Opinion::Agree ? "AGREE" : "DISAGREE";
}

std::string_view to_string(FaultKind k) noexcept {
    switch (k) {
        case FaultKind::Honest: return "HONEST";
        case FaultKind::AlwaysWrong: return "ALWAYS_WRONG";
        case FaultKind::Trojan: return "TROJAN";
    }
    return "?";
}

std::string_view to_string(ReportingKind k) noexcept {
    switch (k) {
        case ReportingKind::Honest: return "HONEST";
        case ReportingKind::Frame: return "FRAME";
        case ReportingKind::Shield: return "SHIELD";
        case ReportingKind::Random: return "RANDOM";
    }
    return "?";
}

std::string_view to_string(InitiatorKind k) noexcept {
    return k == InitiatorKind::Honest ? "HONEST" : "EVADE";
}

std::uint64_t Payload::apply(std::uint64_t honest, Width width) const noexcept {
    const auto m = width_mask(width);
    switch (kind) {
        case PayloadKind::Xor: return (honest ^ value) & m;
        case PayloadKind::Const: return value & m;
        case PayloadKind::Complement: return ~honest & m;
    }
    return honest;
}

bool TrojanModel::triggers(const OperandVector& ops) const noexcept {
    return operand_index < ops.values.size() && (ops.values[operand_index] & mask) == match;
}

void TrojanModel::validate() const {
    if ((match & ~mask) != 0) throw ContractError("trojan match has bits outside its mask");
}

void AdversaryProfile::validate(DeviceId self) const {
    if (fault.kind == FaultKind::Trojan) fault.trojan.validate();
    if (!(reporting.flip_probability >= 0.0 && reporting.flip_probability <= 1.0))
        throw ContractError("reporting probability must lie in [0,1]");
    if (reporting.targets.contains(self))
        throw ContractError("reporting targets must not include the device itself");
    if (initiator.colluders.contains(self))
        throw ContractError("evade colluders must not include the device itself");
}

RoutineOutput apply_fault(const AdversaryProfile& profile, const RoutineSpec& spec,
                          const OperandVector& ops, const RoutineOutput& honest) {
    switch (profile.fault.kind) {
        case FaultKind::Honest: return honest;
        case FaultKind::AlwaysWrong:
            return {~honest.value & width_mask(spec.width), honest.op_count};
        case FaultKind::Trojan: {
            const auto& t = profile.fault.trojan;
            if (t.operand_index >= spec.arity())
                throw ContractError("trojan inspects operand " + std::to_string(t.operand_index) +
                                    " of a routine with arity " + std::to_string(spec.arity()));
            if (!t.triggers(ops)) return honest;
            return {t.payload.apply(honest.value, spec.width), honest.op_count};
        }
    }
    return honest;
}

Rational trigger_probability(const TrojanModel& model, const RoutineSpec& spec) {
    model.validate();
    if (model.operand_index >= spec.arity())
        throw ContractError("trojan operand index out of range for routine");
    if ((model.mask & ~width_mask(spec.width)) != 0)
        throw ContractError("trojan mask wider than routine width");
    // Each mask bit halves the matching values; the rest are free.
    const auto pinned = static_cast<unsigned>(std::popcount(model.mask));
    return Rational{1, std::uint64_t{1} << pinned};
}

Opinion distort_opinion(const AdversaryProfile& profile, Opinion true_opinion, DeviceId checkee,
                        SplitMix64& rng) {
    const auto& r = profile.reporting;
    switch (r.kind) {
        case ReportingKind::Honest: return true_opinion;
        case ReportingKind::Frame:
            return r.targets.contains(checkee) ? Opinion::Disagree : true_opinion;
        case ReportingKind::Shield:
            return r.targets.contains(checkee) ? Opinion::Agree : true_opinion;
        case ReportingKind::Random:
            if (!rng.bernoulli(r.flip_probability)) return true_opinion;
            return true_opinion == Opinion::Agree ? Opinion::Disagree : Opinion::Agree;
    }
    return true_opinion;
}

OperandVector choose_adversarial_operands(const AdversaryProfile& profile,
                                          const OperandVector& honest_ops,
                                          const std::map<DeviceId, TrojanModel>& colluder_trojans,
                                          DeviceId checkee) {
    if (profile.initiator.kind != InitiatorKind::Evade ||
        !profile.initiator.colluders.contains(checkee))
        return honest_ops;
    const auto it = colluder_trojans.find(checkee);
    if (it == colluder_trojans.end()) return honest_ops;

    const auto& t = it->second;
    // An empty mask matches every operand; nothing can be done.
    if (t.mask == 0 || t.operand_index >= honest_ops.values.size()) return honest_ops;

    OperandVector ops = honest_ops;
    const std::uint64_t lowest = t.mask & (~t.mask + 1);
    auto& v = ops.values[t.operand_index];
    v = ((v & ~t.mask) | ((t.match ^ lowest) & t.mask)) & width_mask(ops.width);
    return ops;
}

}  // namespace collabtrust
