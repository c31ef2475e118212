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

// Report assembly and emission. Reports are JSON values with sorted keys;
// reals are rounded to 12 significant digits so that output is stable
// across platforms and runs.

#include <string>

#include <json.hpp>

#include "tqt/presheaf.hpp"

namespace tqt {

enum class ReportFormat { Json, Text };

inline constexpr const char* kToolVersion = "0.1.0";

/// Rounds every real to 12 significant digits and normalises -0.
nlohmann::json canonical_json(const nlohmann::json& j);
/// Real matrices as arrays of numbers, complex ones with [re, im] entries.
nlohmann::json matrix_json(const Matrix& m);
nlohmann::json tolerance_json(const TolerancePolicy& tol);
/// Contexts (id, labels, blocks), the covering relation as [sub, sup] id
/// pairs, and the fingerprint.
nlohmann::json poset_json(const ContextPoset& poset);
/// Sorted member ids.
nlohmann::json sieve_json(const ContextPoset& poset, const Sieve& s);
/// The preferred name of a context: its first label, else its id.
std::string context_name(const ContextPoset& poset, std::size_t v);

std::string render_report(const nlohmann::json& report, ReportFormat format);
/// Writes to the path, or standard output when the path is empty. Throws
/// IoError.
void emit_report(const nlohmann::json& report, ReportFormat format, const std::string& path);

}  // namespace tqt
