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

#include <stdexcept>
#include <string>

namespace collabtrust {

// Caller handed an operation inputs outside its contract (wrong arity,
// out-of-range operand, malformed tally).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Scenario document rejected at load time. `path()` names the offending
// location, e.g. "adversaries[1].trigger.mask".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// A device handler was driven out of order. Always a simulator bug.
class ProtocolViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace collabtrust
