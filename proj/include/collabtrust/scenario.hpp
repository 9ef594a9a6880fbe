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

#include <collabtrust/adversary.hpp>
#include <collabtrust/metrics.hpp>
#include <collabtrust/routine.hpp>
#include <collabtrust/simnet.hpp>
#include <collabtrust/types.hpp>

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string_view>
#include <vector>

namespace collabtrust {

/// A validated run configuration. Defaults reproduce the five-device
/// all-honest baseline.
struct Scenario {
    std::uint32_t population = 5;
    std::uint32_t group_size = 5;
    Round rounds = 25;
    Round regroup_period = 5;  // 0: never regroup voluntarily
    std::uint64_t seed = 1;
    std::uint32_t quorum = 3;
    Tick round_deadline = 10;
    NetworkModel network;
    std::vector<RoutineSpec> routines = routine_catalog();
    std::map<DeviceId, AdversaryProfile> adversaries;
    EnergyModel energy;
    std::uint32_t repetitions = 1;
    std::uint32_t flag_threshold = 1;

    /// Throws ConfigError naming the first violated constraint.
    void validate() const;

    /// Profile of `id`; honest when the scenario lists none.
    AdversaryProfile profile(DeviceId id) const;
    std::map<DeviceId, AdversaryProfile> all_profiles() const;
    std::map<DeviceId, TrojanModel> trojans() const;
    std::vector<DeviceId> population_ids() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses and validates a scenario document (JSON). Omitted keys take the
/// defaults above; unknown keys are errors. Throws ConfigError.
Scenario parse_scenario(std::string_view document);
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

/// Reads a scenario file as a JSON document without validating it.
nlohmann::json load_scenario_document(const std::filesystem::path& path);

}  // namespace collabtrust
