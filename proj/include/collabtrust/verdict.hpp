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
#include <map>
#include <optional>
#include <string_view>

namespace collabtrust {

/// Opinions collected about one checkee. agree + disagree + missing = n_checkers.
struct Tally {
    std::uint32_t agree = 0;
    std::uint32_t disagree = 0;
    std::uint32_t missing = 0;
    std::uint32_t n_checkers = 0;

    static constexpr Tally from_received(std::uint32_t agree, std::uint32_t disagree,
                                         std::uint32_t n_checkers) noexcept {
        return {agree, disagree, n_checkers - agree - disagree, n_checkers};
    }
    constexpr std::uint32_t received() const noexcept { return agree + disagree; }
    constexpr bool well_formed() const noexcept {
        return n_checkers > 0 && agree <= n_checkers && disagree <= n_checkers &&
               missing <= n_checkers &&
               std::uint64_t{agree} + disagree + missing == n_checkers;
    }

    friend bool operator==(const Tally&, const Tally&) = default;
};

enum class Outcome : std::uint8_t { Trusted, Flagged, Inconclusive };
std::string_view to_string(Outcome o) noexcept;

struct Verdict {
    DeviceId checkee;
    Round round = 0;
    Outcome outcome = Outcome::Inconclusive;
    Tally tally;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Majority rule. Below quorum the round is INCONCLUSIVE; otherwise the
/// checkee is FLAGGED iff a strict majority of all n_checkers disagreed.
/// Missing opinions never count as disagreement. Throws ContractError on a
/// malformed tally or a quorum outside [1, n_checkers].
Outcome compute_verdict(const Tally& t, std::uint32_t quorum);

/// floor(n_checkers / 2) + 1.
constexpr std::uint32_t default_quorum(std::uint32_t n_checkers) noexcept {
    return n_checkers / 2 + 1;
}

/// Smallest number of lying checkers able to flag an honest checkee in a
/// group of n: floor((n - 1) / 2) + 1. Throws ContractError for n < 3.
std::uint32_t minimum_corruption_to_frame(std::uint32_t n);

/// Cross-round action state: flag counts and exclusion.
class SuspicionLedger {
public:
    struct Entry {
        std::uint32_t flags = 0;
        bool excluded = false;
        std::optional<Round> first_flag_round;
        std::optional<Round> excluded_round;

        friend bool operator==(const Entry&, const Entry&) = default;
    };

    explicit SuspicionLedger(std::uint32_t flag_threshold = 1) : flag_threshold_(flag_threshold) {}

    /// FLAGGED bumps the checkee's count and excludes it at the threshold.
    /// TRUSTED and INCONCLUSIVE change nothing.
    void record(const Verdict& v);

    bool excluded(DeviceId id) const;
    std::uint32_t flags(DeviceId id) const;
    const Entry* find(DeviceId id) const;
    const std::map<DeviceId, Entry>& entries() const noexcept { return entries_; }
    std::uint32_t flag_threshold() const noexcept { return flag_threshold_; }

    friend bool operator==(const SuspicionLedger&, const SuspicionLedger&) = default;

private:
    std::uint32_t flag_threshold_;
    std::map<DeviceId, Entry> entries_;
};

/// Value-semantics form of SuspicionLedger::record.
SuspicionLedger update_suspicion(SuspicionLedger ledger, const Verdict& v);

}  // namespace collabtrust
