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

#include <collabtrust/metrics.hpp>

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace collabtrust {

enum class ReportFormat : std::uint8_t { Json, Csv };

/// Throws ConfigError for anything other than "json" or "csv".
ReportFormat parse_format(std::string_view name);

nlohmann::ordered_json report_to_json(const SimReport& report);
SimReport report_from_json(const nlohmann::json& doc);

/// JSON: one object with a fixed key order. CSV: one row per device plus a
/// GLOBAL row, columns id,energy,sent,received,flags,excluded_round,detection_round.
std::string emit_report(const SimReport& report, ReportFormat format);

struct SweepRow {
    nlohmann::json value;
    SimReport report;
};

/// Runs the scenario document once per value with `param` (a dotted path
/// such as "network.drop_prob") overwritten. Throws ConfigError on a bad
/// path or an invalid resulting scenario.
std::vector<SweepRow> run_sweep(const nlohmann::json& document, std::string_view param,
                                const std::vector<nlohmann::json>& values);

std::string emit_sweep(const std::vector<SweepRow>& rows, std::string_view param,
                       ReportFormat format);

/// Splits "0,0.1,0.2" into JSON scalars; non-numeric items stay strings.
std::vector<nlohmann::json> parse_value_list(std::string_view list);

}  // namespace collabtrust
