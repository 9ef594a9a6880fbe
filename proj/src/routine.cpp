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

#include <collabtrust/routine.hpp>

#include <collabtrust/error.hpp>
#include <collabtrust/splitmix.hpp>

#include <string>

namespace collabtrust {

std::string_view to_string(Step s) noexcept {
    switch (s) {
        case Step::Add: return "ADD";
        case Step::Mul: return "MUL";
        case Step::Cmp: return "CMP";
    }
    return "?";
}

std::string_view to_string(RoutineKind k) noexcept {
    switch (k) {
        case RoutineKind::Add: return "ADD";
        case RoutineKind::Mul: return "MUL";
        case RoutineKind::Cmp: return "CMP";
        case RoutineKind::Composite: return "COMPOSITE";
    }
    return "?";
}

namespace {

RoutineKind kind_of(Step s) noexcept {
    switch (s) {
        case Step::Add: return RoutineKind::Add;
        case Step::Mul: return RoutineKind::Mul;
        case Step::Cmp: return RoutineKind::Cmp;
    }
    return RoutineKind::Add;
}

Step step_of(RoutineKind k) {
    switch (k) {
        case RoutineKind::Add: return Step::Add;
        case RoutineKind::Mul: return Step::Mul;
        case RoutineKind::Cmp: return Step::Cmp;
        case RoutineKind::Composite: break;
    }
    throw ContractError("composite routine has no single step");
}

bool valid_width(Width w) noexcept {
    return w == Width::W8 || w == Width::W16 || w == Width::W32;
}

}  // namespace

RoutineSpec RoutineSpec::atomic(std::uint32_t id, Step step, Width width) {
    return RoutineSpec{id, kind_of(step), {}, width};
}

void RoutineSpec::validate() const {
    if (!valid_width(width))
        throw ContractError("routine " + std::to_string(id) + ": width must be 8, 16 or 32");
    if (kind == RoutineKind::Composite && steps.empty())
        throw ContractError("routine " + std::to_string(id) + ": composite needs at least one step");
    if (kind != RoutineKind::Composite && !steps.empty())
        throw ContractError("routine " + std::to_string(id) + ": atomic routine cannot list steps");
}

std::uint64_t apply_step(Step step, std::uint64_t a, std::uint64_t b, Width width) noexcept {
    const auto m = width_mask(width);
    switch (step) {
        case Step::Add: return (a + b) & m;
        // Operands are at most 32 bits wide, so the product fits in 64.
        case Step::Mul: return (a * b) & m;
        case Step::Cmp: return a >= b ? 1 : 0;
    }
    return 0;
}

RoutineOutput execute(const RoutineSpec& spec, const OperandVector& ops) {
    spec.validate();
    if (ops.width != spec.width)
        throw ContractError("operand width " + std::to_string(bits(ops.width)) +
                            " does not match routine width " + std::to_string(bits(spec.width)));
    if (ops.values.size() != spec.arity())
        throw ContractError("routine " + std::to_string(spec.id) + " takes " +
                            std::to_string(spec.arity()) + " operands, got " +
                            std::to_string(ops.values.size()));
    const auto m = width_mask(spec.width);
    for (auto v : ops.values)
        if (v > m) throw ContractError("operand " + std::to_string(v) + " exceeds routine width");

    if (spec.kind != RoutineKind::Composite)
        return {apply_step(step_of(spec.kind), ops.values[0], ops.values[1], spec.width), 1};

    std::uint64_t acc = ops.values[0];
    for (std::size_t i = 0; i < spec.steps.size(); ++i)
        acc = apply_step(spec.steps[i], acc, ops.values[i + 1], spec.width);
    return {acc, static_cast<std::uint32_t>(spec.steps.size())};
}

RoutineSpec compose(std::span<const Step> steps, Width width, std::uint32_t id) {
    if (steps.empty()) throw ContractError("compose: empty step list");
    RoutineSpec spec{id, RoutineKind::Composite, {steps.begin(), steps.end()}, width};
    spec.validate();
    return spec;
}

std::vector<RoutineSpec> routine_catalog() {
    constexpr Step add_mul[] = {Step::Add, Step::Mul};
    constexpr Step mul_add_cmp[] = {Step::Mul, Step::Add, Step::Cmp};
    return {
        RoutineSpec::atomic(0, Step::Add),
        RoutineSpec::atomic(1, Step::Mul),
        RoutineSpec::atomic(2, Step::Cmp),
        compose(add_mul, Width::W8, 3),
        compose(mul_add_cmp, Width::W8, 4),
    };
}

std::uint64_t challenge_mix(Round round, DeviceId checkee, std::uint32_t routine_id) noexcept {
    std::uint64_t h = mix64(std::uint64_t{routine_id} + kGolden);
    h = mix64(h ^ (std::uint64_t{checkee.value} + 2 * kGolden));
    return mix64(h ^ (round + 3 * kGolden));
}

OperandVector generate_operands(std::uint64_t seed, Round round, DeviceId checkee,
                                const RoutineSpec& spec) {
    SplitMix64 stream(seed ^ challenge_mix(round, checkee, spec.id));
    OperandVector ops{{}, spec.width};
    ops.values.reserve(spec.arity());
    for (std::size_t i = 0; i < spec.arity(); ++i)
        ops.values.push_back(stream.next() & width_mask(spec.width));
    return ops;
}

}  // namespace collabtrust
