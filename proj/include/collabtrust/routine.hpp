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

#include <collabtrust/types.hpp>

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace collabtrust {

enum class Step : std::uint8_t { Add, Mul, Cmp };
enum class RoutineKind : std::uint8_t { Add, Mul, Cmp, Composite };
enum class Width : std::uint8_t { W8 = 8, W16 = 16, W32 = 32 };

constexpr unsigned bits(Width w) noexcept { return static_cast<unsigned>(w); }
constexpr std::uint64_t width_mask(Width w) noexcept { return (std::uint64_t{1} << bits(w)) - 1; }

std::string_view to_string(Step s) noexcept;
std::string_view to_string(RoutineKind k) noexcept;

/// A deterministic fixed-width test function. Atomic kinds take two operands;
/// a composite left-folds its steps over len(steps) + 1 operands.
struct RoutineSpec {
    std::uint32_t id = 0;
    RoutineKind kind = RoutineKind::Add;
    std::vector<Step> steps;
    Width width = Width::W8;

    std::size_t arity() const noexcept {
        return kind == RoutineKind::Composite ? steps.size() + 1 : 2;
    }

    static RoutineSpec atomic(std::uint32_t id, Step step, Width width = Width::W8);

    /// Throws ContractError unless steps is empty iff kind is atomic.
    void validate() const;

    friend bool operator==(const RoutineSpec&, const RoutineSpec&) = default;
};

struct OperandVector {
    std::vector<std::uint64_t> values;
    Width width = Width::W8;

    friend bool operator==(const OperandVector&, const OperandVector&) = default;
};

struct RoutineOutput {
    std::uint64_t value = 0;
    std::uint32_t op_count = 0;

    friend bool operator==(const RoutineOutput&, const RoutineOutput&) = default;
};

/// Honest semantics of one primitive step, mod 2^W. CMP is 1 iff a >= b.
std::uint64_t apply_step(Step step, std::uint64_t a, std::uint64_t b, Width width) noexcept;

/// Runs `spec` on `ops`. Throws ContractError on arity or width mismatch,
/// or when an operand does not fit in W bits.
RoutineOutput execute(const RoutineSpec& spec, const OperandVector& ops);

/// Builds a COMPOSITE routine. Throws ContractError when steps is empty.
RoutineSpec compose(std::span<const Step> steps, Width width, std::uint32_t id = 0);

/// The built-in suite: ADD, MUL, CMP at W=8, then COMPOSITE [ADD,MUL] and
/// COMPOSITE [MUL,ADD,CMP]. ids equal list positions 0..4.
std::vector<RoutineSpec> routine_catalog();

/// Seed perturbation for one challenge. Distinct (round, checkee, routine)
/// triples land on unrelated SplitMix64 streams.
std::uint64_t challenge_mix(Round round, DeviceId checkee, std::uint32_t routine_id) noexcept;

/// Draws arity words from SplitMix64(seed ^ challenge_mix(...)), each masked
/// to the routine's width.
OperandVector generate_operands(std::uint64_t seed, Round round, DeviceId checkee,
                                const RoutineSpec& spec);

}  // namespace collabtrust
