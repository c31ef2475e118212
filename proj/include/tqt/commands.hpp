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

#pragma once

// Command dispatch for the tqt tool: each command builds a JSON report from
// a parsed scenario.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tqt/scenario.hpp"

namespace tqt {

/// Misuse of the command line (exit status 1), as opposed to a failure of
/// the computation (exit status 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommandOptions {
  std::string command;
  std::string scenario;
  std::optional<std::string> op;
  std::optional<std::string> state;
  std::optional<std::string> stage;
  std::optional<std::string> prop;
  std::optional<std::string> witness;
  std::optional<std::string> unitary;
  std::string mode = "outer";
  std::optional<double> tolerance;
};

const std::vector<std::string>& command_names();

/// eps_matrix from the command line, else from the environment value, else
/// the scenario's. Throws InvalidArgument if the result is inconsistent.
TolerancePolicy resolve_tolerance(const TolerancePolicy& scenario, std::optional<double> cli,
                                  const char* env_value);

struct Proposition {
  std::string op;
  std::vector<Interval> intervals;
};

/// "A in [a,b]" optionally followed by "or [c,d]" terms. Throws UsageError.
Proposition parse_proposition(const std::string& text);
Projection proposition_projection(const Scenario& s, const Proposition& p);

/// Runs the command. Throws UsageError for bad options, Error otherwise.
nlohmann::json dispatch(const CommandOptions& opts, const Scenario& s);

}  // namespace tqt
