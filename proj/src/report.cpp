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

#include "tqt/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tqt/scenario.hpp"

namespace tqt {

using nlohmann::json;

namespace {

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

}  // namespace

json canonical_json(const json& j) {
  if (j.is_number_float()) return round12(j.get<double>());
  if (j.is_array()) {
    json out = json::array();
    for (const auto& e : j) out.push_back(canonical_json(e));
    return out;
  }
  if (j.is_object()) {
    json out = json::object();
    for (const auto& [k, v] : j.items()) out[k] = canonical_json(v);
    return out;
  }
  return j;
}

json matrix_json(const Matrix& m) { return matrix_to_json(m); }

json tolerance_json(const TolerancePolicy& tol) {
  return {{"eps_matrix", tol.eps_matrix}, {"eps_eig", tol.eps_eig}, {"eps_prob", tol.eps_prob}};
}

std::string context_name(const ContextPoset& poset, std::size_t v) {
  for (const auto& [label, idx] : poset.labels())
    if (idx == v) return label;
  return poset.at(v).id();
}

json poset_json(const ContextPoset& poset) {
  json contexts = json::array();
  for (std::size_t v = 0; v < poset.size(); ++v) {
    json labels = json::array();
    for (const auto& [label, idx] : poset.labels())
      if (idx == v) labels.push_back(label);
    json blocks = json::array();
    for (const auto& b : poset.at(v).blocks()) blocks.push_back(matrix_json(b.matrix()));
    contexts.push_back({{"id", poset.at(v).id()}, {"labels", labels}, {"blocks", blocks}});
  }
  json cover = json::array();
  for (std::size_t a = 0; a < poset.size(); ++a)
    for (std::size_t b = 0; b < poset.size(); ++b) {
      if (a == b || !poset.leq(a, b)) continue;
      bool covering = true;
      for (std::size_t c = 0; c < poset.size() && covering; ++c)
        if (c != a && c != b && poset.leq(a, c) && poset.leq(c, b)) covering = false;
      if (covering) cover.push_back(json::array({poset.at(a).id(), poset.at(b).id()}));
    }
  return {{"dimension", poset.dim()},
          {"include_trivial", poset.include_trivial()},
          {"fingerprint", poset.fingerprint()},
          {"contexts", contexts},
          {"covering", cover},
          {"note", "all results are relative to this finite family of contexts"}};
}

json sieve_json(const ContextPoset& poset, const Sieve& s) { return sieve_ids(poset, s); }

namespace {

bool is_scalar(const json& j) { return !j.is_array() && !j.is_object(); }

std::string scalar_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

bool scalar_array(const json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j)
    if (!is_scalar(e) && !(e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())) return false;
  return true;
}

std::string inline_array(const json& j) {
  std::string out = "[";
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (i) out += ", ";
    out += is_scalar(j[i]) ? scalar_text(j[i]) : j[i].dump();
  }
  return out + "]";
}

void render_text(std::ostream& os, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (is_scalar(v)) {
        os << pad << k << ": " << scalar_text(v) << "\n";
      } else if (scalar_array(v)) {
        os << pad << k << ": " << inline_array(v) << "\n";
      } else {
        os << pad << k << ":\n";
        render_text(os, v, indent + 2);
      }
    }
  } else if (j.is_array()) {
    for (const auto& e : j) {
      if (is_scalar(e)) {
        os << pad << "- " << scalar_text(e) << "\n";
      } else if (scalar_array(e)) {
        os << pad << "| " << inline_array(e) << "\n";
      } else {
        os << pad << "-\n";
        render_text(os, e, indent + 2);
      }
    }
  } else {
    os << pad << scalar_text(j) << "\n";
  }
}

}  // namespace

std::string render_report(const json& report, ReportFormat format) {
  const json c = canonical_json(report);
  if (format == ReportFormat::Json) return c.dump(2) + "\n";
  std::ostringstream os;
  render_text(os, c, 0);
  return os.str();
}

void emit_report(const json& report, ReportFormat format, const std::string& path) {
  const std::string text = render_report(report, format);
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write report to " + path);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace tqt
