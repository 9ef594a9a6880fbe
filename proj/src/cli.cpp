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

#include <collabtrust/cli.hpp>

#include <collabtrust/error.hpp>
#include <collabtrust/oracle.hpp>
#include <collabtrust/report.hpp>
#include <collabtrust/scenario.hpp>
#include <collabtrust/simulator.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <sstream>

namespace collabtrust {
namespace {

void write_output(const std::string& path, const std::string& bytes, std::ostream& out) {
    if (path.empty()) {
        out << bytes;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError(path, "cannot open output file");
    f << bytes;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"collabtrust: collaborative-trust protocol simulator", "collabtrust"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, trace_path, format_name = "json";
    std::optional<std::uint64_t> seed;

    auto* run = app.add_subcommand("run", "Run a scenario and emit its report");
    run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--out", out_path, "Write the report here instead of stdout");
    run->add_option("--format", format_name, "Report format")->check(CLI::IsMember({"json", "csv"}));
    run->add_option("--trace", trace_path, "Write the event trace to this file");

    std::string param, values;
    auto* sweep = app.add_subcommand("sweep", "Run a scenario once per parameter value");
    sweep->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    sweep->add_option("--param", param, "Dotted scenario key, e.g. network.drop_prob")->required();
    sweep->add_option("--values", values, "Comma-separated values")->required();
    sweep->add_option("--out", out_path, "Write the rows here instead of stdout");
    sweep->add_option("--format", format_name, "Row format")->check(CLI::IsMember({"json", "csv"}));

    auto* oracle_cmd = app.add_subcommand("oracle", "Print reference tables");
    oracle_cmd->require_subcommand(1);
    std::uint32_t table_n = 5, table_quorum = 0;
    auto* table = oracle_cmd->add_subcommand("verdict-table", "Exhaustive verdict decision table");
    table->add_option("--n", table_n, "Group size (checkers = n - 1)")->required();
    table->add_option("--quorum", table_quorum, "Quorum (default floor((n-1)/2) + 1)");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream usage;
        const int code = app.exit(e, usage, err);
        out << usage.str();
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) {
            auto sc = load_scenario(scenario_path);
            if (seed) sc.seed = *seed;
            sc.validate();
            const auto format = parse_format(format_name);
            SimReport report;
            if (!trace_path.empty()) {
                std::ofstream trace(trace_path, std::ios::binary);
                if (!trace) throw ConfigError(trace_path, "cannot open trace file");
                report = run_repetitions(sc, &trace);
            } else {
                report = run_repetitions(sc);
            }
            write_output(out_path, emit_report(report, format), out);
        } else if (*sweep) {
            const auto doc = load_scenario_document(scenario_path);
            const auto format = parse_format(format_name);
            const auto rows = run_sweep(doc, param, parse_value_list(values));
            write_output(out_path, emit_sweep(rows, param, format), out);
        } else if (*table) {
            const auto rows = oracle::verdict_table(table_n, table_quorum);
            const auto q = table_quorum == 0 ? (table_n - 1) / 2 + 1 : table_quorum;
            out << oracle::render_verdict_table(rows, table_n, q);
        }
    } catch (const ConfigError& e) {
        err << "scenario error: " << e.what() << '\n';
        return 1;
    } catch (const ContractError& e) {
        err << "invalid input: " << e.what() << '\n';
        return 1;
    } catch (const ProtocolViolation& e) {
        err << "protocol violation: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace collabtrust
