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

// Unitary action on contexts and covariance of daseinisation, and the
// translations of daseinised quantities into disjoint-sum and tensor
// composites.

#include <optional>
#include <string>
#include <vector>

#include "tqt/truth.hpp"

namespace tqt {

class UnitaryOperator {
 public:
  UnitaryOperator() = default;
  /// Checks U U^dagger == 1 within eps_matrix. Throws NonUnitaryInput.
  explicit UnitaryOperator(const Matrix& m, const TolerancePolicy& tol = {});
  static UnitaryOperator identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  UnitaryOperator adjoint() const;
  UnitaryOperator operator*(const UnitaryOperator& o) const;

  Matrix conjugate(const Matrix& a) const { return m_ * a * m_.adjoint(); }
  Projection conjugate(const Projection& p) const;
  Vector apply(const Vector& v) const { return m_ * v; }

 private:
  Matrix m_;
};

/// The Hermitian phase operator theta with U = exp(i theta) and
/// eigenvalues in (-pi, pi].
HermitianOperator phase_operator(const UnitaryOperator& u, const TolerancePolicy& tol = {});
/// exp(i A).
Matrix exp_i(const HermitianOperator& a, const TolerancePolicy& tol = {});

/// l_U(V): the context with blocks U Q_i U^dagger.
Context ell_U(const UnitaryOperator& u, const Context& v, const TolerancePolicy& tol = {});

struct CheckRecord {
  bool ok = true;
  double discrepancy = 0.0;
  std::string detail;
};

/// U delta^o(P)_V U^dagger == delta^o(U P U^dagger)_{l_U(V)}.
CheckRecord covariance_check(const Projection& p, const UnitaryOperator& u, const Context& v,
                             const TolerancePolicy& tol = {});

/// An order-preserving map between context posets, by index.
struct MonotoneMap {
  PosetPtr source;
  PosetPtr target;
  std::vector<std::size_t> map;
};

/// Validates order preservation. Throws NonMonotoneMap.
MonotoneMap make_monotone_map(PosetPtr source, PosetPtr target, std::vector<std::size_t> map);
/// l_U as a map of the poset to itself. Throws PosetNotClosedUnderU.
MonotoneMap ell_U_map(const UnitaryOperator& u, PosetPtr poset, const TolerancePolicy& tol = {});
/// Pulls a presheaf on the target back along the map.
FinitePresheaf inverse_image(const MonotoneMap& m, const FinitePresheaf& p);

/// nu(delta(UPU*) in T^{U psi})_{l_U(V)} == l_U(nu(delta(P) in T^psi)_V).
/// Throws PosetNotClosedUnderU unless l_U maps the downset of V into the
/// poset.
CheckRecord truth_covariance_check(const Projection& p, const UnitaryOperator& u, const StateVector& psi,
                                   std::size_t v, const ContextPoset& poset, const TolerancePolicy& tol = {});

/// exp(i delta^o(theta)_V) where theta is the phase operator of U; its
/// spectral family is the inner daseinisation of U's.
UnitaryOperator das_unitary(const UnitaryOperator& u, const Context& v, const TolerancePolicy& tol = {});

/// Blocks Q (+) 0 and 0 (+) R. A trivial factor contributes its identity.
Context direct_sum_context(const Context& v1, const Context& v2, const TolerancePolicy& tol = {});
/// Blocks Q (x) R.
Context tensor_context(const Context& v1, const Context& v2, const TolerancePolicy& tol = {});

struct TranslationRecord {
  Matrix direct;      // daseinisation computed on the composite
  Matrix translated;  // assembled from the factors
  double discrepancy = 0.0;
  bool equal = true;
};

/// delta^o(A1 (+) A2)_{V (+) C1} against delta^o(A1)_V (+) max sp(A2) 1.
TranslationRecord direct_sum_translate(const HermitianOperator& a1, const HermitianOperator& a2, const Context& v,
                                       const TolerancePolicy& tol = {});
/// delta(A1 (+) A2)_{V1 (+) V2} against delta(A1)_V1 (+) delta(A2)_V2.
TranslationRecord direct_sum_lemma(const HermitianOperator& a1, const HermitianOperator& a2, const Context& v1,
                                   const Context& v2, DasMode mode, const TolerancePolicy& tol = {});

/// V_W: the largest subalgebra V of B(H1) with V (x) 1 inside W. May be
/// trivial.
Context tensor_floor(const Context& w, int d1, int d2, const TolerancePolicy& tol = {});
/// delta^o(A1)_{V_W} (x) 1.
HermitianOperator tensor_translate(const HermitianOperator& a1, const Context& w, int d2,
                                   const TolerancePolicy& tol = {});

struct GapRecord {
  std::size_t context = 0;  // index in the composite poset
  Context floor;
  TranslationRecord comparison;  // direct: delta^o(A1 (x) 1)_W
};

struct GapSearch {
  std::vector<GapRecord> records;
  std::optional<std::size_t> witness;  // first record whose sides differ
};

/// Compares delta^o(A1 (x) 1)_W with delta^o(A1)_{V_W} (x) 1 over every
/// context of the composite poset. Sides differ when the entrywise
/// difference exceeds eps_eig.
GapSearch translation_gap_witness(const HermitianOperator& a1, const ContextPoset& composite, int d2,
                                  const TolerancePolicy& tol = {});

}  // namespace tqt
