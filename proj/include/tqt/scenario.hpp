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

// Scenario files: JSON documents naming operators, unitaries and states on
// one Hilbert space, the policy that generates its context poset, and
// optional composite-system and witness declarations.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tqt/transform.hpp"

namespace tqt {

/// One factor of a composite system: its operators and the contexts they
/// generate (each entry a list of commuting operator names; an empty list
/// is the trivial algebra).
struct FactorDecl {
  int dim = 0;
  std::vector<std::pair<std::string, HermitianOperator>> operators;
  std::vector<std::vector<std::string>> contexts;
};

/// A context on the composite space given by spanning vectors per block;
/// the orthogonal remainder, if any, becomes a final block.
struct BlockContextDecl {
  std::string name;
  std::vector<std::vector<Vector>> blocks;
};

enum class CompositeKind { Tensor, DirectSum };

struct CompositeDecl {
  CompositeKind kind = CompositeKind::Tensor;
  FactorDecl first;
  FactorDecl second;
  std::vector<BlockContextDecl> entangled;
};

struct Scenario {
  std::string name;
  int dimension = 0;
  TolerancePolicy tol;
  std::vector<std::pair<std::string, HermitianOperator>> operators;
  std::vector<std::pair<std::string, UnitaryOperator>> unitaries;
  std::vector<std::pair<std::string, StateVector>> states;
  std::vector<std::string> seeds;
  Closure closure = Closure::None;
  bool include_trivial = false;
  std::vector<std::pair<std::string, std::vector<std::string>>> named_contexts;
  std::optional<CompositeDecl> composite;
  std::optional<std::string> witness;

  /// Throws ValidationError naming the missing entry.
  const HermitianOperator& op(const std::string& name) const;
  const UnitaryOperator& unitary(const std::string& name) const;
  const StateVector& state(const std::string& name) const;
};

/// Parses and validates. ParseError carries source:line:column; a
/// ValidationError names the field path and the line it starts on.
Scenario parse_scenario_text(const std::string& text, const std::string& source = "<scenario>");
Scenario parse_scenario(const std::string& path);

/// Serialises a scenario back to the input format.
nlohmann::json scenario_to_json(const Scenario& s);

/// The poset generated by the scenario's context policy, labelled with the
/// seed-clique names and the named contexts.
PosetPtr scenario_poset(const Scenario& s);

/// Contexts of the composite space: products of factor contexts (tensor)
/// or direct sums (disjoint sum), plus the declared block contexts.
PosetPtr composite_poset(const CompositeDecl& c, const TolerancePolicy& tol = {});
/// The contexts a factor declares, in declaration order.
std::vector<Context> factor_contexts(const FactorDecl& f, const TolerancePolicy& tol = {});

/// Matrix from nested arrays whose entries are numbers or [re, im] pairs.
Matrix matrix_from_json(const nlohmann::json& j, const std::string& field);
Vector vector_from_json(const nlohmann::json& j, const std::string& field);
/// Real entries as numbers, complex entries as [re, im].
nlohmann::json matrix_to_json(const Matrix& m);
nlohmann::json vector_to_json(const Vector& v);

}  // namespace tqt
