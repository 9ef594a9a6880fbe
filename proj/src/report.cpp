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

#include <collabtrust/report.hpp>

#include <collabtrust/error.hpp>
#include <collabtrust/scenario.hpp>
#include <collabtrust/simulator.hpp>

#include <charconv>
#include <sstream>

namespace collabtrust {

using nlohmann::json;
using nlohmann::ordered_json;

ReportFormat parse_format(std::string_view name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    throw ConfigError("format", "unknown report format \"" + std::string(name) + "\"");
}

namespace {

std::string number(double v) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string optional_round(const std::optional<Round>& r) {
    return r ? std::to_string(*r) : std::string{};
}

ordered_json round_or_null(const std::optional<Round>& r) {
    return r ? ordered_json(*r) : ordered_json(nullptr);
}

std::optional<Round> round_from(const json& v) {
    if (v.is_null()) return std::nullopt;
    return v.get<Round>();
}

double mean_detection_rate(const SimReport& r) {
    if (r.detections.empty() || r.repetitions == 0) return 0.0;
    std::uint64_t hits = 0;
    for (const auto& d : r.detections) hits += d.detected_runs;
    return static_cast<double>(hits) / (static_cast<double>(r.repetitions) * r.detections.size());
}

}  // namespace

ordered_json report_to_json(const SimReport& r) {
    ordered_json j;
    j["repetitions"] = r.repetitions;
    j["rounds_executed"] = r.rounds_executed;
    j["verdicts"] = r.verdicts;
    j["trusted"] = r.trusted;
    j["flagged"] = r.flagged;
    j["inconclusive"] = r.inconclusive;
    j["false_positives"] = r.false_positives;
    j["messages_sent"] = r.messages_sent;
    j["messages_delivered"] = r.messages_delivered;
    j["messages_dropped"] = r.messages_dropped;
    j["messages_late"] = r.messages_late;
    j["messages_stray"] = r.messages_stray;
    j["messages_in_flight"] = r.messages_in_flight;
    j["energy_total"] = r.energy_total;
    j["halted_runs"] = r.halted_runs;
    j["halt_reason"] = r.halt_reason.empty() ? ordered_json(nullptr) : ordered_json(r.halt_reason);

    auto devices = ordered_json::array();
    for (const auto& d : r.devices) {
        ordered_json o;
        o["id"] = d.id.value;
        o["energy"] = d.energy;
        o["ops"] = d.ops;
        o["sent"] = d.sent;
        o["received"] = d.received;
        o["flags"] = d.flags;
        o["excluded_round"] = round_or_null(d.excluded_round);
        o["detection_round"] = round_or_null(d.detection_round);
        devices.push_back(std::move(o));
    }
    j["devices"] = std::move(devices);

    auto detections = ordered_json::array();
    for (const auto& d : r.detections) {
        ordered_json o;
        o["device"] = d.device.value;
        o["detected_runs"] = d.detected_runs;
        o["detection_rate"] = r.detection_rate(d.device);
        o["latency_sum"] = d.latency_sum;
        o["mean_latency"] = d.detected_runs ? ordered_json(static_cast<double>(d.latency_sum) /
                                                           static_cast<double>(d.detected_runs))
                                            : ordered_json(nullptr);
        o["first_detection_round"] = round_or_null(d.first_detection_round);
        detections.push_back(std::move(o));
    }
    j["detections"] = std::move(detections);
    return j;
}

SimReport report_from_json(const json& j) {
    SimReport r;
    r.repetitions = j.at("repetitions").get<std::uint32_t>();
    r.rounds_executed = j.at("rounds_executed").get<std::uint64_t>();
    r.verdicts = j.at("verdicts").get<std::uint64_t>();
    r.trusted = j.at("trusted").get<std::uint64_t>();
    r.flagged = j.at("flagged").get<std::uint64_t>();
    r.inconclusive = j.at("inconclusive").get<std::uint64_t>();
    r.false_positives = j.at("false_positives").get<std::uint64_t>();
    r.messages_sent = j.at("messages_sent").get<std::uint64_t>();
    r.messages_delivered = j.at("messages_delivered").get<std::uint64_t>();
    r.messages_dropped = j.at("messages_dropped").get<std::uint64_t>();
    r.messages_late = j.at("messages_late").get<std::uint64_t>();
    r.messages_stray = j.at("messages_stray").get<std::uint64_t>();
    r.messages_in_flight = j.at("messages_in_flight").get<std::uint64_t>();
    r.energy_total = j.at("energy_total").get<double>();
    r.halted_runs = j.at("halted_runs").get<std::uint32_t>();
    if (!j.at("halt_reason").is_null()) r.halt_reason = j.at("halt_reason").get<std::string>();
    for (const auto& o : j.at("devices")) {
        DeviceStats d;
        d.id = DeviceId{o.at("id").get<std::uint32_t>()};
        d.energy = o.at("energy").get<double>();
        d.ops = o.at("ops").get<std::uint64_t>();
        d.sent = o.at("sent").get<std::uint64_t>();
        d.received = o.at("received").get<std::uint64_t>();
        d.flags = o.at("flags").get<std::uint64_t>();
        d.excluded_round = round_from(o.at("excluded_round"));
        d.detection_round = round_from(o.at("detection_round"));
        r.devices.push_back(d);
    }
    for (const auto& o : j.at("detections")) {
        DetectionStat d;
        d.device = DeviceId{o.at("device").get<std::uint32_t>()};
        d.detected_runs = o.at("detected_runs").get<std::uint64_t>();
        d.latency_sum = o.at("latency_sum").get<std::uint64_t>();
        d.first_detection_round = round_from(o.at("first_detection_round"));
        r.detections.push_back(d);
    }
    return r;
}

std::string emit_report(const SimReport& r, ReportFormat format) {
    if (format == ReportFormat::Json) return report_to_json(r).dump(2) + "\n";

    std::ostringstream os;
    os << "id,energy,sent,received,flags,excluded_round,detection_round\n";
    std::uint64_t received = 0, flags = 0;
    for (const auto& d : r.devices) {
        os << d.id.value << ',' << number(d.energy) << ',' << d.sent << ',' << d.received << ','
           << d.flags << ',' << optional_round(d.excluded_round) << ','
           << optional_round(d.detection_round) << '\n';
        received += d.received;
        flags += d.flags;
    }
    os << "GLOBAL," << number(r.energy_total) << ',' << r.messages_sent << ',' << received << ','
       << flags << ",,\n";
    return os.str();
}

namespace {

json& resolve(json& doc, std::string_view param) {
    if (param.empty()) throw ConfigError("param", "empty parameter path");
    json* node = &doc;
    std::string walked;
    while (true) {
        const auto dot = param.find('.');
        const std::string key(param.substr(0, dot));
        walked += (walked.empty() ? "" : ".") + key;
        if (node->is_array()) {
            std::size_t idx = 0;
            const auto [end, ec] = std::from_chars(key.data(), key.data() + key.size(), idx);
            if (ec != std::errc{} || end != key.data() + key.size() || idx >= node->size())
                throw ConfigError(walked, "not a valid array index");
            node = &(*node)[idx];
        } else if (node->is_object() || node->is_null()) {
            node = &(*node)[key];
        } else {
            throw ConfigError(walked, "cannot descend into a scalar");
        }
        if (dot == std::string_view::npos) return *node;
        param.remove_prefix(dot + 1);
    }
}

}  // namespace

std::vector<SweepRow> run_sweep(const json& document, std::string_view param,
                                const std::vector<json>& values) {
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (const auto& v : values) {
        json doc = document;
        resolve(doc, param) = v;
        const auto sc = scenario_from_json(doc);
        rows.push_back({v, run_repetitions(sc)});
    }
    return rows;
}

std::string emit_sweep(const std::vector<SweepRow>& rows, std::string_view param,
                       ReportFormat format) {
    if (format == ReportFormat::Json) {
        ordered_json j;
        j["param"] = param;
        auto arr = ordered_json::array();
        for (const auto& row : rows) {
            ordered_json o;
            o["value"] = ordered_json::parse(row.value.dump());
            o["report"] = report_to_json(row.report);
            arr.push_back(std::move(o));
        }
        j["rows"] = std::move(arr);
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    os << param
       << ",repetitions,rounds_executed,verdicts,trusted,flagged,inconclusive,false_positives,"
          "messages_sent,messages_dropped,energy_total,detection_rate\n";
    for (const auto& row : rows) {
        const auto& r = row.report;
        os << (row.value.is_string() ? row.value.get<std::string>() : row.value.dump()) << ','
           << r.repetitions << ',' << r.rounds_executed << ',' << r.verdicts << ',' << r.trusted
           << ',' << r.flagged << ',' << r.inconclusive << ',' << r.false_positives << ','
           << r.messages_sent << ',' << r.messages_dropped << ',' << number(r.energy_total) << ',';
        if (!r.detections.empty()) os << number(mean_detection_rate(r));
        os << '\n';
    }
    return os.str();
}

std::vector<json> parse_value_list(std::string_view list) {
    std::vector<json> out;
    while (true) {
        const auto comma = list.find(',');
        auto item = list.substr(0, comma);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (item.empty()) throw ConfigError("values", "empty item in value list");
        const auto parsed = json::parse(item, nullptr, false);
        if (!parsed.is_discarded() && (parsed.is_number() || parsed.is_boolean()))
            out.push_back(parsed);
        else
            out.emplace_back(std::string(item));
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace collabtrust
