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

#include <collabtrust/verdict.hpp>

#include <collabtrust/error.hpp>

#include <string>

namespace collabtrust {

std::string_view to_string(Outcome o) noexcept {
    switch (o) {
        case Outcome::Trusted: return "TRUSTED";
        case Outcome::Flagged: return "FLAGGED";
        case Outcome::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

Outcome compute_verdict(const Tally& t, std::uint32_t quorum) {
    if (!t.well_formed()) throw ContractError("malformed tally");
    if (quorum < 1 || quorum > t.n_checkers)
        throw ContractError("quorum " + std::to_string(quorum) + " outside [1, " +
                            std::to_string(t.n_checkers) + "]");
    if (t.received() < quorum) return Outcome::Inconclusive;
    // Strict majority of all checkers; an even split stays TRUSTED.
    return 2 * std::uint64_t{t.disagree} > t.n_checkers ? Outcome::Flagged : Outcome::Trusted;
}

std::uint32_t minimum_corruption_to_frame(std::uint32_t n) {
    if (n < 3) throw ContractError("group size must be at least 3");
    return (n - 1) / 2 + 1;
}

void SuspicionLedger::record(const Verdict& v) {
    if (v.outcome != Outcome::Flagged) return;
    auto& e = entries_[v.checkee];
    ++e.flags;
    if (!e.first_flag_round) e.first_flag_round = v.round;
    if (!e.excluded && e.flags >= flag_threshold_) {
        e.excluded = true;
        e.excluded_round = v.round;
    }
}

bool SuspicionLedger::excluded(DeviceId id) const {
    const auto* e = find(id);
    return e != nullptr && e->excluded;
}

std::uint32_t SuspicionLedger::flags(DeviceId id) const {
    const auto* e = find(id);
    return e == nullptr ? 0 : e->flags;
}

const SuspicionLedger::Entry* SuspicionLedger::find(DeviceId id) const {
    const auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
}

SuspicionLedger update_suspicion(SuspicionLedger ledger, const Verdict& v) {
    ledger.record(v);
    return ledger;
}

}  // namespace collabtrust
