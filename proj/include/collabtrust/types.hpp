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

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

namespace collabtrust {

/// Index of a device in the scenario population.
struct DeviceId {
    std::uint32_t value = 0;

    friend constexpr auto operator<=>(DeviceId, DeviceId) = default;
    friend std::ostream& operator<<(std::ostream& os, DeviceId id) { return os << id.value; }
};

using Round = std::uint64_t;
using Tick = std::uint64_t;

/// One collaborative checking network. Member order is the rotation order.
struct GroupConfig {
    std::vector<DeviceId> members;
    std::uint32_t quorum = 0;
    Tick round_deadline = 10;
    Round first_round = 0;

    std::size_t size() const noexcept { return members.size(); }
    bool contains(DeviceId id) const noexcept {
        for (auto m : members)
            if (m == id) return true;
        return false;
    }
    void validate() const;
};

}  // namespace collabtrust

template <>
struct std::hash<collabtrust::DeviceId> {
    std::size_t operator()(collabtrust::DeviceId id) const noexcept { return id.value; }
};
