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

// Kochen-Specker machinery: witness ray/basis sets, the context poset they
// span, exhaustive global-section search with a certificate, the dual
// presheaf over Boolean subalgebras, and the functional composition check.

#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tqt/dasein.hpp"

namespace tqt {

/// Rays and orthonormal bases built from them. Rays are stored normalised.
struct WitnessSet {
  std::string name;
  int dim = 0;
  std::vector<std::string> ray_names;
  std::vector<Vector> rays;
  std::vector<std::vector<std::size_t>> bases;  // indices into rays
};

/// Text format, one directive per line, '#' starts a comment:
///   name <identifier>
///   dim <n>
///   ray <label> = <x1> ... <xn>      (reals or rationals p/q)
///   basis <label> ... <label>
/// Throws InvalidWitness with the offending line.
WitnessSet parse_witness(std::istream& in, const std::string& source = "<witness>");
WitnessSet load_witness(const std::string& path);
/// Path of a witness shipped in the data directory, by name.
std::string bundled_witness_path(const std::string& name);
/// Loads a witness given either a file path or a bundled name.
WitnessSet load_witness_ref(const std::string& ref);

/// Each basis orthonormal and complete, every ray used. Throws InvalidWitness.
void validate_witness(const WitnessSet& w, const TolerancePolicy& tol = {});

/// One maximal context per basis and a context {P_r, 1 - P_r} per ray.
/// Throws EmptyPoset for a witness without bases.
ContextPoset ks_poset_from_witness(const WitnessSet& w, const TolerancePolicy& tol = {});

struct SearchCertificate {
  bool found = false;
  std::optional<Section> section;  // the first section found
  std::size_t sections = 0;        // sections enumerated (up to the limit)
  std::size_t nodes = 0;
  std::size_t prunes = 0;
  bool complete = true;  // enumeration was exhaustive
  std::string fingerprint;
};

SearchCertificate section_search(const FinitePresheaf& sigma,
                                 std::size_t limit = std::numeric_limits<std::size_t>::max());

/// Counting argument: if every ray lies in an even number of bases while
/// the number of bases is odd, no assignment picks exactly one ray per
/// basis consistently.
struct ParityVerdict {
  bool applies = false;  // the hypotheses hold, so unsatisfiability is proven
  std::size_t basis_count = 0;
  std::vector<std::size_t> incidence;  // per ray
};

ParityVerdict parity_oracle(const WitnessSet& w);

/// Fibre at B: the homomorphisms B -> {0,1}, found by enumeration over
/// atom assignments; restriction composes with the inclusion B' -> B.
PresheafPtr dual_presheaf(PosetPtr poset);

/// The least element of B above P, found by searching the whole lattice.
Projection boolean_das(const Projection& p, const Context& b, const TolerancePolicy& tol = {});

struct NamedFunction {
  std::string name;
  std::function<double(double)> f;
};

/// For every operator A with f(A) inside some context, checks that the
/// value the section assigns to f(A) is f of the value assigned to A.
/// Values are read off the selected block of every context containing the
/// operator, and must agree. Throws OperatorNotInScope when an operator
/// lies in no context.
std::optional<std::string> func_check(const ContextPoset& poset, const Section& s,
                                      const std::vector<std::pair<std::string, HermitianOperator>>& ops,
                                      const NamedFunction& f, const TolerancePolicy& tol = {});

}  // namespace tqt
