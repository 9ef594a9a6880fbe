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

#include <collabtrust/scenario.hpp>

#include <collabtrust/error.hpp>

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>

namespace collabtrust {

using nlohmann::json;

namespace {

void only_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> known) {
    if (!obj.is_object()) throw ConfigError(path.empty() ? "$" : path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (auto k : known) ok |= (k == key);
        if (!ok) throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
    }
}

std::string child(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

// Unsigned integer, written either as a JSON number or as a "0x..." string.
std::uint64_t as_uint(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const auto x = v.get<std::int64_t>();
        if (x < 0) throw ConfigError(path, "must be non-negative");
        return static_cast<std::uint64_t>(x);
    }
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        std::string_view digits = s;
        int base = 10;
        if (digits.starts_with("0x") || digits.starts_with("0X")) {
            digits.remove_prefix(2);
            base = 16;
        }
        std::uint64_t out = 0;
        const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out, base);
        if (ec == std::errc{} && end == digits.data() + digits.size() && !digits.empty()) return out;
    }
    throw ConfigError(path, "expected an unsigned integer");
}

std::uint32_t as_u32(const json& v, const std::string& path) {
    const auto x = as_uint(v, path);
    if (x > 0xFFFFFFFFULL) throw ConfigError(path, "value too large");
    return static_cast<std::uint32_t>(x);
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    return v.get<double>();
}

const std::string& as_string(const json& v, const std::string& path) {
    if (!v.is_string()) throw ConfigError(path, "expected a string");
    return v.get_ref<const std::string&>();
}

template <class Enum>
Enum as_enum(const json& v, const std::string& path,
             std::initializer_list<std::pair<std::string_view, Enum>> table) {
    const auto& s = as_string(v, path);
    for (const auto& [name, value] : table)
        if (name == s) return value;
    std::string names;
    for (const auto& [name, value] : table) names += (names.empty() ? "" : ", ") + std::string(name);
    throw ConfigError(path, "unknown value \"" + s + "\" (expected one of " + names + ")");
}

std::set<DeviceId> as_id_set(const json& v, const std::string& path) {
    if (!v.is_array()) throw ConfigError(path, "expected an array of device ids");
    std::set<DeviceId> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.insert(DeviceId{as_u32(v[i], path + "[" + std::to_string(i) + "]")});
    return out;
}

Step as_step(const json& v, const std::string& path) {
    return as_enum<Step>(v, path, {{"ADD", Step::Add}, {"MUL", Step::Mul}, {"CMP", Step::Cmp}});
}

RoutineSpec parse_routine(const json& r, const std::string& path) {
    only_keys(r, path, {"id", "kind", "steps", "width"});
    if (!r.contains("id")) throw ConfigError(child(path, "id"), "missing");
    if (!r.contains("kind")) throw ConfigError(child(path, "kind"), "missing");
    RoutineSpec spec;
    spec.id = as_u32(r["id"], child(path, "id"));
    spec.kind = as_enum<RoutineKind>(r["kind"], child(path, "kind"),
                                     {{"ADD", RoutineKind::Add},
                                      {"MUL", RoutineKind::Mul},
                                      {"CMP", RoutineKind::Cmp},
                                      {"COMPOSITE", RoutineKind::Composite}});
    if (r.contains("width")) {
        const auto w = as_uint(r["width"], child(path, "width"));
        if (w != 8 && w != 16 && w != 32) throw ConfigError(child(path, "width"), "must be 8, 16 or 32");
        spec.width = static_cast<Width>(w);
    }
    if (r.contains("steps")) {
        const auto& steps = r["steps"];
        if (!steps.is_array()) throw ConfigError(child(path, "steps"), "expected an array");
        for (std::size_t i = 0; i < steps.size(); ++i)
            spec.steps.push_back(as_step(steps[i], child(path, "steps") + "[" + std::to_string(i) + "]"));
    }
    try {
        spec.validate();
    } catch (const ContractError& e) {
        throw ConfigError(path, e.what());
    }
    return spec;
}

Payload parse_payload(const json& p, const std::string& path) {
    if (p.is_string()) {
        if (as_string(p, path) != "COMPLEMENT")
            throw ConfigError(path, "string payload must be \"COMPLEMENT\"; use {\"kind\", \"value\"} for XOR/CONST");
        return Payload{PayloadKind::Complement, 0};
    }
    only_keys(p, path, {"kind", "value"});
    if (!p.contains("kind")) throw ConfigError(child(path, "kind"), "missing");
    Payload out;
    out.kind = as_enum<PayloadKind>(p["kind"], child(path, "kind"),
                                    {{"XOR", PayloadKind::Xor},
                                     {"CONST", PayloadKind::Const},
                                     {"COMPLEMENT", PayloadKind::Complement}});
    if (out.kind != PayloadKind::Complement) {
        if (!p.contains("value")) throw ConfigError(child(path, "value"), "missing");
        out.value = as_uint(p["value"], child(path, "value"));
    }
    return out;
}

std::pair<DeviceId, AdversaryProfile> parse_adversary(const json& a, const std::string& path) {
    only_keys(a, path,
              {"device", "fault", "trigger", "payload", "reporting", "targets", "p",
               "initiator_policy", "colluders"});
    if (!a.contains("device")) throw ConfigError(child(path, "device"), "missing");
    const DeviceId id{as_u32(a["device"], child(path, "device"))};
    AdversaryProfile prof;

    if (a.contains("fault"))
        prof.fault.kind = as_enum<FaultKind>(a["fault"], child(path, "fault"),
                                             {{"HONEST", FaultKind::Honest},
                                              {"ALWAYS_WRONG", FaultKind::AlwaysWrong},
                                              {"TROJAN", FaultKind::Trojan}});
    if (prof.fault.kind == FaultKind::Trojan) {
        if (!a.contains("trigger")) throw ConfigError(child(path, "trigger"), "required for TROJAN");
        const auto& t = a["trigger"];
        const auto tp = child(path, "trigger");
        only_keys(t, tp, {"index", "mask", "match"});
        for (auto k : {"index", "mask", "match"})
            if (!t.contains(k)) throw ConfigError(child(tp, k), "missing");
        prof.fault.trojan.operand_index = as_uint(t["index"], child(tp, "index"));
        prof.fault.trojan.mask = as_uint(t["mask"], child(tp, "mask"));
        prof.fault.trojan.match = as_uint(t["match"], child(tp, "match"));
        if (a.contains("payload")) prof.fault.trojan.payload = parse_payload(a["payload"], child(path, "payload"));
    } else if (a.contains("trigger") || a.contains("payload")) {
        throw ConfigError(child(path, a.contains("trigger") ? "trigger" : "payload"),
                          "only meaningful for fault TROJAN");
    }

    if (a.contains("reporting"))
        prof.reporting.kind = as_enum<ReportingKind>(a["reporting"], child(path, "reporting"),
                                                     {{"HONEST", ReportingKind::Honest},
                                                      {"FRAME", ReportingKind::Frame},
                                                      {"SHIELD", ReportingKind::Shield},
                                                      {"RANDOM", ReportingKind::Random}});
    if (a.contains("targets")) prof.reporting.targets = as_id_set(a["targets"], child(path, "targets"));
    if (prof.reporting.kind == ReportingKind::Random) {
        if (!a.contains("p")) throw ConfigError(child(path, "p"), "required for RANDOM reporting");
        prof.reporting.flip_probability = as_number(a["p"], child(path, "p"));
    } else if (a.contains("p")) {
        throw ConfigError(child(path, "p"), "only meaningful for RANDOM reporting");
    }

    if (a.contains("initiator_policy"))
        prof.initiator.kind = as_enum<InitiatorKind>(a["initiator_policy"], child(path, "initiator_policy"),
                                                     {{"HONEST", InitiatorKind::Honest},
                                                      {"EVADE", InitiatorKind::Evade}});
    if (prof.initiator.kind == InitiatorKind::Evade)
        prof.initiator.colluders = a.contains("colluders")
                                       ? as_id_set(a["colluders"], child(path, "colluders"))
                                       : prof.reporting.targets;
    else if (a.contains("colluders"))
        throw ConfigError(child(path, "colluders"), "only meaningful for EVADE initiators");

    return {id, std::move(prof)};
}

}  // namespace

void Scenario::validate() const {
    if (group_size < 3) throw ConfigError("group_size", "must be at least 3");
    if (group_size > population)
        throw ConfigError("group_size", "group size " + std::to_string(group_size) +
                                            " exceeds population " + std::to_string(population));
    if (quorum < 1 || quorum > group_size - 1)
        throw ConfigError("quorum", "must lie in [1, group_size - 1]");
    if (round_deadline < 1) throw ConfigError("round_deadline", "must be at least 1");
    if (repetitions < 1) throw ConfigError("repetitions", "must be at least 1");
    if (flag_threshold < 1) throw ConfigError("flag_threshold", "must be at least 1");
    if (seed > UINT64_MAX - repetitions) throw ConfigError("seed", "seed + repetitions overflows");
    try {
        network.validate(round_deadline);
    } catch (const ContractError& e) {
        throw ConfigError("network", e.what());
    }
    try {
        energy.validate();
    } catch (const ContractError& e) {
        throw ConfigError("energy", e.what());
    }

    if (routines.empty()) throw ConfigError("routines", "catalog is empty");
    for (std::size_t i = 0; i < routines.size(); ++i) {
        const auto path = "routines[id=" + std::to_string(i) + "]";
        if (routines[i].id != i) throw ConfigError(path, "routine ids must equal catalog positions");
        try {
            routines[i].validate();
        } catch (const ContractError& e) {
            throw ConfigError(path, e.what());
        }
    }

    for (const auto& [id, prof] : adversaries) {
        const auto path = "adversaries[device=" + std::to_string(id.value) + "]";
        if (id.value >= population) throw ConfigError(child(path, "device"), "not in the population");
        try {
            prof.validate(id);
        } catch (const ContractError& e) {
            throw ConfigError(path, e.what());
        }
        for (auto t : prof.reporting.targets)
            if (t.value >= population) throw ConfigError(child(path, "targets"), "device not in the population");
        for (auto t : prof.initiator.colluders)
            if (t.value >= population) throw ConfigError(child(path, "colluders"), "device not in the population");
        if (prof.fault.kind == FaultKind::Trojan)
            for (const auto& r : routines)
                if (prof.fault.trojan.operand_index >= r.arity())
                    throw ConfigError(child(path, "trigger.index"),
                                      "operand " + std::to_string(prof.fault.trojan.operand_index) +
                                          " does not exist in routine " + std::to_string(r.id));
    }
}

AdversaryProfile Scenario::profile(DeviceId id) const {
    const auto it = adversaries.find(id);
    return it == adversaries.end() ? AdversaryProfile{} : it->second;
}

std::map<DeviceId, AdversaryProfile> Scenario::all_profiles() const {
    std::map<DeviceId, AdversaryProfile> out;
    for (auto id : population_ids()) out.emplace(id, profile(id));
    return out;
}

std::map<DeviceId, TrojanModel> Scenario::trojans() const {
    std::map<DeviceId, TrojanModel> out;
    for (const auto& [id, prof] : adversaries)
        if (prof.fault.kind == FaultKind::Trojan) out.emplace(id, prof.fault.trojan);
    return out;
}

std::vector<DeviceId> Scenario::population_ids() const {
    std::vector<DeviceId> ids(population);
    for (std::uint32_t i = 0; i < population; ++i) ids[i] = DeviceId{i};
    return ids;
}

Scenario scenario_from_json(const json& doc) {
    only_keys(doc, "",
              {"name", "description", "population", "group_size", "rounds", "regroup_period", "seed",
               "quorum", "round_deadline", "network", "routines", "adversaries", "energy",
               "repetitions", "flag_threshold"});
    Scenario sc;
    if (doc.contains("population")) sc.population = as_u32(doc["population"], "population");
    if (doc.contains("group_size")) sc.group_size = as_u32(doc["group_size"], "group_size");
    if (doc.contains("rounds")) sc.rounds = as_uint(doc["rounds"], "rounds");
    sc.regroup_period = doc.contains("regroup_period") ? as_uint(doc["regroup_period"], "regroup_period")
                                                       : sc.group_size;
    if (doc.contains("seed")) sc.seed = as_uint(doc["seed"], "seed");
    sc.quorum = doc.contains("quorum") ? as_u32(doc["quorum"], "quorum")
                                       : (sc.group_size >= 1 ? (sc.group_size - 1) / 2 + 1 : 1);
    if (doc.contains("round_deadline")) sc.round_deadline = as_uint(doc["round_deadline"], "round_deadline");
    if (doc.contains("repetitions")) sc.repetitions = as_u32(doc["repetitions"], "repetitions");
    if (doc.contains("flag_threshold")) sc.flag_threshold = as_u32(doc["flag_threshold"], "flag_threshold");
    for (auto k : {"name", "description"})
        if (doc.contains(k)) as_string(doc[k], k);

    if (doc.contains("network")) {
        const auto& n = doc["network"];
        only_keys(n, "network", {"latency_min", "latency_max", "drop_prob"});
        if (n.contains("latency_min")) sc.network.latency_min = as_uint(n["latency_min"], "network.latency_min");
        if (n.contains("latency_max")) sc.network.latency_max = as_uint(n["latency_max"], "network.latency_max");
        if (n.contains("drop_prob")) sc.network.drop_prob = as_number(n["drop_prob"], "network.drop_prob");
    }
    if (doc.contains("energy")) {
        const auto& e = doc["energy"];
        only_keys(e, "energy", {"e_op", "e_tx", "e_rx"});
        if (e.contains("e_op")) sc.energy.e_op = as_number(e["e_op"], "energy.e_op");
        if (e.contains("e_tx")) sc.energy.e_tx = as_number(e["e_tx"], "energy.e_tx");
        if (e.contains("e_rx")) sc.energy.e_rx = as_number(e["e_rx"], "energy.e_rx");
    }
    if (doc.contains("routines")) {
        const auto& rs = doc["routines"];
        if (!rs.is_array()) throw ConfigError("routines", "expected an array");
        for (std::size_t i = 0; i < rs.size(); ++i) {
            const auto path = "routines[" + std::to_string(i) + "]";
            auto spec = parse_routine(rs[i], path);
            if (spec.id < sc.routines.size())
                sc.routines[spec.id] = std::move(spec);
            else if (spec.id == sc.routines.size())
                sc.routines.push_back(std::move(spec));
            else
                throw ConfigError(child(path, "id"), "new routine ids must continue the catalog (next is " +
                                                         std::to_string(sc.routines.size()) + ")");
        }
    }
    if (doc.contains("adversaries")) {
        const auto& as = doc["adversaries"];
        if (!as.is_array()) throw ConfigError("adversaries", "expected an array");
        for (std::size_t i = 0; i < as.size(); ++i) {
            const auto path = "adversaries[" + std::to_string(i) + "]";
            auto [id, prof] = parse_adversary(as[i], path);
            if (!sc.adversaries.emplace(id, std::move(prof)).second)
                throw ConfigError(child(path, "device"), "device listed twice");
        }
    }
    sc.validate();
    return sc;
}

Scenario parse_scenario(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ConfigError("$", std::string("syntax error: ") + e.what());
    }
    return scenario_from_json(doc);
}

json load_scenario_document(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string(), "cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string(), std::string("syntax error: ") + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& path) {
    return scenario_from_json(load_scenario_document(path));
}

}  // namespace collabtrust
