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

// Test-side reader for the line-oriented trace. Independent of the writer.

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace tracecheck {

struct Line {
    std::uint64_t time = 0;
    std::uint64_t seq = 0;
    std::string kind;
    std::optional<std::uint32_t> from;
    std::optional<std::uint32_t> to;
    std::map<std::string, std::string> fields;

    std::uint64_t num(const std::string& key) const { return std::stoull(fields.at(key)); }
    const std::string& str(const std::string& key) const { return fields.at(key); }
};

inline std::optional<std::uint32_t> endpoint(const std::string& tok) {
    if (tok == "-") return std::nullopt;
    return static_cast<std::uint32_t>(std::stoul(tok));
}

inline std::vector<Line> parse(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        if (raw.empty() || raw[0] == '#') continue;
        std::istringstream ls(raw);
        Line l;
        std::string from, to, tok;
        ls >> l.time >> l.seq >> l.kind >> from >> to;
        l.from = endpoint(from);
        l.to = endpoint(to);
        while (ls >> tok) {
            const auto eq = tok.find('=');
            l.fields[tok.substr(0, eq)] = eq == std::string::npos ? "" : tok.substr(eq + 1);
        }
        out.push_back(std::move(l));
    }
    return out;
}

inline std::vector<Line> of_kind(const std::vector<Line>& lines, const std::string& kind) {
    std::vector<Line> out;
    for (const auto& l : lines)
        if (l.kind == kind) out.push_back(l);
    return out;
}

}  // namespace tracecheck
