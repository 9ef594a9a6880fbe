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

#include <collabtrust/oracle.hpp>

#include <collabtrust/error.hpp>

#include <sstream>

namespace collabtrust::oracle {

Outcome reference_outcome(std::uint32_t agree, std::uint32_t disagree, std::uint32_t missing,
                          std::uint32_t quorum) {
    // Lay the votes out one by one and let each DISAGREE cancel one
    // non-DISAGREE vote; a disagreeing majority is whatever survives.
    std::vector<int> votes;
    votes.insert(votes.end(), agree, +1);
    votes.insert(votes.end(), missing, 0);
    votes.insert(votes.end(), disagree, -1);

    std::uint32_t received = 0;
    for (int v : votes) received += (v != 0);
    if (received < quorum) return Outcome::Inconclusive;

    std::int64_t balance = 0;
    for (int v : votes) balance += (v < 0) ? 1 : -1;
    return balance > 0 ? Outcome::Flagged : Outcome::Trusted;
}

std::vector<VerdictRow> verdict_table(std::uint32_t group_size, std::uint32_t quorum) {
    if (group_size < 3) throw ContractError("verdict table needs a group of at least 3");
    const std::uint32_t n = group_size - 1;
    if (quorum == 0) quorum = n / 2 + 1;
    if (quorum > n) throw ContractError("quorum exceeds the number of checkers");

    std::vector<VerdictRow> rows;
    for (std::uint32_t a = 0; a <= n; ++a)
        for (std::uint32_t d = 0; a + d <= n; ++d)
            rows.push_back({a, d, n - a - d, reference_outcome(a, d, n - a - d, quorum)});
    return rows;
}

std::string render_verdict_table(const std::vector<VerdictRow>& rows, std::uint32_t group_size,
                                 std::uint32_t quorum) {
    std::ostringstream os;
    os << "# group_size=" << group_size << " n_checkers=" << group_size - 1
       << " quorum=" << quorum << '\n';
    os << "agree disagree missing outcome\n";
    for (const auto& r : rows)
        os << r.agree << ' ' << r.disagree << ' ' << r.missing << ' ' << to_string(r.outcome) << '\n';
    return os.str();
}

}  // namespace collabtrust::oracle
