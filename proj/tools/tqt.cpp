// Copyright 2026 The tqt Authors
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

// tqt: command-line front end for the topos quantum theory toolkit.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "tqt/commands.hpp"
#include "tqt/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"tqt: finite-dimensional topos quantum theory toolkit"};
  tqt::CommandOptions opts;
  std::string format = "json";
  std::string out;
  std::string commands;
  for (const auto& c : tqt::command_names()) commands += (commands.empty() ? "" : "|") + c;

  app.add_option("command", opts.command, commands)->required();
  app.add_option("--scenario", opts.scenario, "scenario JSON file");
  app.add_option("--op", opts.op, "operator name");
  app.add_option("--state", opts.state, "state name");
  app.add_option("--stage", opts.stage, "context label or id");
  app.add_option("--prop", opts.prop, "proposition, e.g. \"A in [1,2]\"");
  app.add_option("--mode", opts.mode, "outer|inner")->check(CLI::IsMember({"outer", "inner"}));
  app.add_option("--witness", opts.witness, "bundled witness name or witness file");
  app.add_option("--format", format, "json|text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--out", out, "write the report here instead of standard output");
  app.add_option("--tolerance", opts.tolerance, "eps_matrix override");
  app.footer("TQT_TOLERANCE overrides eps_matrix when --tolerance is absent.\n"
             "Exit status: 0 success, 1 usage error, 2 domain error.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const auto& names = tqt::command_names();
    if (std::find(names.begin(), names.end(), opts.command) == names.end())
      throw tqt::UsageError("unknown command '" + opts.command + "'");
    tqt::Scenario scenario;
    if (!opts.scenario.empty()) {
      scenario = tqt::parse_scenario(opts.scenario);
    } else if (!(opts.command == "ks" && opts.witness)) {
      throw tqt::UsageError(opts.command + " requires --scenario");
    } else {
      scenario.name = "none";
    }
    scenario.tol = tqt::resolve_tolerance(scenario.tol, opts.tolerance, std::getenv("TQT_TOLERANCE"));
    const auto report = tqt::dispatch(opts, scenario);
    tqt::emit_report(report, format == "text" ? tqt::ReportFormat::Text : tqt::ReportFormat::Json, out);
    return 0;
  } catch (const tqt::UsageError& e) {
    std::cerr << "tqt: usage: " << e.what() << "\n";
    return 1;
  } catch (const tqt::Error& e) {
    std::cerr << "tqt: " << e.what() << "\n";
    return e.code() == tqt::ErrorCode::UnknownCommand ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "tqt: internal error: " << e.what() << "\n";
    return 2;
  }
}
