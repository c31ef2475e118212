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

// Truth objects, pseudo-states and sieve-valued truth values; filters,
// observable and antonymous functions, and expectation brackets.
//
// Every filter of a finite Boolean lattice is principal, so a filter is
// kept as its least element. A filter over the whole projection lattice is
// likewise represented by a single generator.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tqt/dasein.hpp"

namespace tqt {

/// A pure or mixed state; probability of a projection is <psi|P|psi> or
/// tr(rho P).
using State = std::variant<StateVector, DensityMatrix>;

double probability(const State& s, const Projection& p);
int state_dim(const State& s);

/// Per context, the set of elements of P(V) holding with probability one.
struct TruthObject {
  PosetPtr poset;
  std::vector<std::vector<char>> member;  // [context][mask]

  bool contains(std::size_t v, BlockMask alpha) const { return member.at(v).at(alpha) != 0; }
  std::vector<BlockMask> fibre(std::size_t v) const;
  /// The same data as a subobject of the outer presheaf.
  Subobject as_subobject(const PresheafPtr& outer) const;
};

TruthObject truth_object(const State& s, PosetPtr poset, const TolerancePolicy& tol = {});
/// Each fibre is a proper filter and outer daseinisation maps fibres into
/// fibres. Reports the first failure.
std::optional<std::string> validate_truth_object(const TruthObject& t, const TolerancePolicy& tol = {});

/// w^psi: the section V -> delta^o(|psi><psi|)_V and its clopen subobject.
struct PseudoState {
  GlobalSectionOfG section;
  Subobject clopen;
};

PseudoState pseudo_state(const StateVector& psi, const PresheafPtr& sigma, const TolerancePolicy& tol = {});
/// The truth object recovered as {alpha in P(V) : alpha >= w_V}.
TruthObject recover_truth_object(const PseudoState& w);

/// nu(delta(P) in T^s)_V = { V' <= V : Prob(delta^o(P)_V') = 1 }.
Sieve truth_value(const Projection& p, const State& s, std::size_t v, const ContextPoset& poset,
                  const TolerancePolicy& tol = {});
/// nu(w^psi subset delta(P))_V = { V' <= V : w_V' <= delta^o(P)_V' }.
Sieve truth_value_subset(const Projection& p, const PseudoState& w, std::size_t v, const ContextPoset& poset,
                         const TolerancePolicy& tol = {});

/// Prob(delta^o(P)_V') for every V' below V, in downset order.
std::vector<double> truth_probabilities(const Projection& p, const State& s, std::size_t v,
                                        const ContextPoset& poset, const TolerancePolicy& tol = {});

/// A proper filter given by its least element. With a scope, membership is
/// restricted to P(scope); without one the filter lives in the full
/// projection lattice.
struct Filter {
  Projection generator;
  std::optional<Context> scope;

  bool contains(const Projection& r, const TolerancePolicy& tol = {}) const;
};

/// The filter of P(V) generated by the given elements: their meet and
/// everything above it. Throws EmptyFilter when the meet is 0 or no
/// generator is given.
Filter context_filter(const Context& v, const std::vector<BlockMask>& generators);
/// Every proper filter of P(V), one per nonzero mask.
std::vector<Filter> all_context_filters(const Context& v);
/// Members of a scoped filter, as masks of its scope.
std::vector<BlockMask> filter_members(const Filter& f, const TolerancePolicy& tol = {});
/// C(F) = { R : alpha <= R for some alpha in F }.
Filter cone(const Filter& f);
/// T^psi = { P : P >= |psi><psi| }.
Filter quasi_point(const StateVector& psi);

/// f_A(F) = inf{ mu : E_mu in F }. Spectral projections outside a scoped
/// filter's lattice are tested against its cone.
double observable_fn(const HermitianOperator& a, const Filter& f, const TolerancePolicy& tol = {});
/// g_A(F) = sup{ lambda : 1 - E_lambda in F }.
double antonymous_fn(const HermitianOperator& a, const Filter& f, const TolerancePolicy& tol = {});

struct Bracket {
  double lower = 0.0;  // g_A(T^psi)
  double mean = 0.0;   // <psi|A|psi>
  double upper = 0.0;  // f_A(T^psi)
};

Bracket expectation_bracket(const HermitianOperator& a, const StateVector& psi, const TolerancePolicy& tol = {});

}  // namespace tqt
