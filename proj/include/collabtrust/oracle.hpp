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

#include <collabtrust/verdict.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace collabtrust::oracle {

// Reference decision table for the majority rule, built by enumerating the
// individual votes of every tally. Shares no code with compute_verdict.

struct VerdictRow {
    std::uint32_t agree = 0;
    std::uint32_t disagree = 0;
    std::uint32_t missing = 0;
    Outcome outcome = Outcome::Inconclusive;
};

/// Outcome for one tally: INCONCLUSIVE when fewer than `quorum` votes
/// arrived; FLAGGED when the DISAGREE voters outnumber everyone else.
Outcome reference_outcome(std::uint32_t agree, std::uint32_t disagree, std::uint32_t missing,
                          std::uint32_t quorum);

/// Every (agree, disagree, missing) triple summing to group_size - 1, in
/// lexicographic order of (agree, disagree). quorum 0 selects the default
/// floor(n_checkers/2) + 1.
std::vector<VerdictRow> verdict_table(std::uint32_t group_size, std::uint32_t quorum = 0);

std::string render_verdict_table(const std::vector<VerdictRow>& rows, std::uint32_t group_size,
                                 std::uint32_t quorum);

}  // namespace collabtrust::oracle
