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

// Daseinisation of projections and self-adjoint operators, the spectral,
// outer and inner presheaves, and clopen subobjects of the spectral
// presheaf.
//
// At finite dimension a character of a context V is fixed by the minimal
// projection it sends to 1, so a spectral element is a (context, block)
// pair and every fibre subset is clopen.

#include <optional>
#include <utility>
#include <vector>

#include "tqt/presheaf.hpp"

namespace tqt {

struct SpectralElement {
  std::size_t context = 0;
  std::size_t block = 0;
  friend bool operator==(const SpectralElement&, const SpectralElement&) = default;
};

/// <lambda, A> for the character selecting `block`; A must lie in V.
/// Throws InvalidArgument otherwise.
double evaluate(const Context& v, std::size_t block, const Matrix& a, const TolerancePolicy& tol = {});

/// Sigma: fibre at V is V's blocks; restriction sends a block to the
/// unique block of the subcontext dominating it.
PresheafPtr spectral_presheaf(PosetPtr poset);

/// Outer (resp. inner) presheaf: fibre at V is P(V) indexed by BlockMask,
/// restrictions are outer (resp. inner) daseinisation.
PresheafPtr outer_presheaf(PosetPtr poset);
PresheafPtr inner_presheaf(PosetPtr poset);

/// Blocks Q_i of V with Q_i P != 0; the least element of P(V) above P.
BlockMask outer_das_mask(const Projection& p, const Context& v, const TolerancePolicy& tol = {});
/// Blocks Q_i of V with Q_i <= P; the greatest element of P(V) below P.
BlockMask inner_das_mask(const Projection& p, const Context& v, const TolerancePolicy& tol = {});
Projection outer_das_proj(const Projection& p, const Context& v, const TolerancePolicy& tol = {});
Projection inner_das_proj(const Projection& p, const Context& v, const TolerancePolicy& tol = {});

/// A global element of the outer presheaf, V -> element of P(V).
struct GlobalSectionOfG {
  PosetPtr poset;
  std::vector<BlockMask> values;

  Projection at(std::size_t v) const { return poset->at(v).lattice_element(values.at(v)); }
  friend bool operator==(const GlobalSectionOfG& a, const GlobalSectionOfG& b) {
    return a.poset == b.poset && a.values == b.values;
  }
};

GlobalSectionOfG das_proj_global(const Projection& p, PosetPtr poset, const TolerancePolicy& tol = {});
/// True iff the section is compatible with the outer presheaf restrictions.
bool is_outer_section(const GlobalSectionOfG& s, const TolerancePolicy& tol = {});
/// Meet of all the projections of the section.
Projection section_meet(const GlobalSectionOfG& s, const TolerancePolicy& tol = {});

enum class DasMode { Outer, Inner };

/// Outer: S_V = {lambda : <lambda, delta^o(P)_V> = 1};
/// inner: T_V = {lambda : <lambda, delta^i(P)_V> = 0}.
Subobject clopen_subobject(const Projection& p, const PresheafPtr& sigma, DasMode mode,
                           const TolerancePolicy& tol = {});
/// The subobject {lambda : <lambda, gamma_V> = 1} of a section of G.
Subobject subobject_of_section(const GlobalSectionOfG& s, const PresheafPtr& sigma);

struct SurjectivityFailure {
  std::size_t v = 0;
  std::size_t sub = 0;
};

/// Checks that every restriction maps S_V onto S_{V'}; returns the first
/// failing pair.
std::optional<SurjectivityFailure> restriction_surjectivity_check(const Subobject& s);

/// Integral of lambda against the inner daseinisation of A's spectral
/// family. The result is the least element of V above A in the spectral
/// order.
HermitianOperator outer_das_sa(const HermitianOperator& a, const Context& v, const TolerancePolicy& tol = {});
/// Integral of lambda against the right limit of the outer daseinisation of
/// A's spectral family; the greatest element of V below A.
HermitianOperator inner_das_sa(const HermitianOperator& a, const Context& v, const TolerancePolicy& tol = {});

/// Heyting operations in Sub_cl(Sigma).
Subobject clopen_heyting(HeytingOp op, const Subobject& s, const Subobject& t);

struct DeGrooteTable {
  std::vector<HermitianOperator> outer;  // V -> delta^o(A)_V
  std::vector<HermitianOperator> inner;  // V -> delta^i(A)_V
};

DeGrooteTable degroote_table(const HermitianOperator& a, const ContextPoset& poset,
                             const TolerancePolicy& tol = {});
/// Checks that both tables are global sections of the de Groote presheaves:
/// daseinising the value at V into V' <= V gives the value at V'.
std::optional<std::string> validate_degroote(const DeGrooteTable& t, const ContextPoset& poset,
                                             const TolerancePolicy& tol = {});
bool tables_equal(const std::vector<HermitianOperator>& a, const std::vector<HermitianOperator>& b,
                  double eps);

/// Meet in the spectral order: E_lambda = join of the families.
HermitianOperator spectral_meet(const std::vector<HermitianOperator>& ops, const TolerancePolicy& tol = {});
/// Join in the spectral order: E_lambda = meet of the families.
HermitianOperator spectral_join(const std::vector<HermitianOperator>& ops, const TolerancePolicy& tol = {});

/// { V' <= V : lambda|V' in S_{delta^o(alpha)_{V'}} } for alpha in P(V).
Sieve iota_sieve(BlockMask alpha, std::size_t v, std::size_t block, const ContextPoset& poset,
                 const TolerancePolicy& tol = {});
/// { V' <= V : l1|V' = l2|V' }.
Sieve equality_sieve(std::size_t v, std::size_t b1, std::size_t b2, const ContextPoset& poset);

}  // namespace tqt
