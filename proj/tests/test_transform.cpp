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


#include <numbers>

#include <doctest.h>

#include "support.hpp"
#include "tqt/transform.hpp"

using namespace tqt;
using namespace tqt::test;

namespace {

Matrix hadamard() {
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

Context vz() { return diag_context({0, 1}); }
Context vx() { return context_from_labels(hadamard(), {0, 1}); }

}  // namespace

TEST_CASE("unitary validation") {
  TQT_CHECK_CODE(UnitaryOperator(HermitianOperator::diagonal({1, 2}).matrix()), ErrorCode::NonUnitaryInput);
  const UnitaryOperator h(hadamard());
  CHECK(max_abs_diff((h * h.adjoint()).matrix(), Matrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("unitary action on contexts") {
  CHECK(ell_U(UnitaryOperator::identity(2), vz()).id() == vz().id());
  CHECK(ell_U(UnitaryOperator(hadamard()), vz()).id() == vx().id());
  Matrix perm = Matrix::Zero(3, 3);
  perm(1, 0) = perm(2, 1) = perm(0, 2) = 1;
  const auto v = diag_context({0, 0, 1});
  const auto moved = ell_U(UnitaryOperator(perm), v);
  CHECK(moved.id() == diag_context({1, 0, 0}).id());
  std::set<std::string> orbit{v.id()};
  Context c = v;
  for (int k = 0; k < 3; ++k) orbit.insert((c = ell_U(UnitaryOperator(perm), c)).id());
  CHECK(orbit.size() == 3);
}

TEST_CASE("covariance of daseinisation") {
  const UnitaryOperator h(hadamard());
  const auto px = Projection::onto(vec({1, 1}));
  const auto r = covariance_check(px, h, vz());
  CHECK(r.ok);
  CHECK(covariance_check(px, UnitaryOperator::identity(2), vz()).ok);
  Rng rng(61);
  for (int t = 0; t < 60; ++t) {
    const int n = rng.integer(2, 4);
    const Matrix b = random_unitary(rng, n);
    const auto v = random_context(rng, b, n);
    const auto p = random_projection(rng, related_basis(rng, b));
    const UnitaryOperator u(random_unitary(rng, n));
    const auto rec = covariance_check(p, u, v);
    CHECK(rec.ok);
    CHECK(rec.discrepancy < 1e-9);
  }
}

TEST_CASE("unitary maps on a closed poset") {
  const auto zx = make_poset({vz(), vx()});
  const UnitaryOperator h(hadamard());
  const auto m = ell_U_map(h, zx);
  CHECK(m.map[0] == 1);
  CHECK(m.map[1] == 0);
  const UnitaryOperator z(HermitianOperator::diagonal({1, -1}).matrix());
  const auto mz = ell_U_map(z, zx);
  const auto mhz = ell_U_map(h * z, zx);
  for (std::size_t v = 0; v < 2; ++v) CHECK(mhz.map[v] == m.map[mz.map[v]]);
  const auto id = ell_U_map(UnitaryOperator::identity(2), zx);
  CHECK(id.map == std::vector<std::size_t>{0, 1});
  TQT_CHECK_CODE(ell_U_map(h, make_poset({vz()})), ErrorCode::PosetNotClosedUnderU);

  const auto sigma = spectral_presheaf(zx);
  const auto pulled = inverse_image(id, *sigma);
  for (std::size_t v = 0; v < 2; ++v) CHECK(pulled.fibre_size(v) == sigma->fibre_size(v));
  const auto swapped = inverse_image(m, *sigma);
  CHECK_FALSE(validate(swapped).has_value());

  for (const auto& psi : {vec({1, 0}), vec({1, 1}), vec({1, Complex(0, 1)})})
    for (std::size_t v = 0; v < 2; ++v) {
      CHECK(truth_covariance_check(Projection::onto(vec({1, 1})), h, StateVector::normalized(psi), v, *zx).ok);
      CHECK(truth_covariance_check(dproj({1, 0}), h, StateVector::normalized(psi), v, *zx).ok);
    }
}

TEST_CASE("monotone maps are validated") {
  const auto chain = make_poset({diag_context({0, 1, 2}), diag_context({0, 0, 1})});
  TQT_CHECK_CODE(make_monotone_map(chain, chain, {1, 0}), ErrorCode::NonMonotoneMap);
  TQT_CHECK_CODE(make_monotone_map(chain, chain, {0}), ErrorCode::NonMonotoneMap);
  CHECK_NOTHROW(make_monotone_map(chain, chain, {1, 1}));
}

TEST_CASE("phase operator and unitary daseinisation") {
  Rng rng(62);
  for (int t = 0; t < 20; ++t) {
    const UnitaryOperator u(random_unitary(rng, 3));
    CHECK(max_abs_diff(exp_i(phase_operator(u)), u.matrix()) < 1e-7);
  }
  const UnitaryOperator d(HermitianOperator::diagonal({1, 1}).matrix());
  CHECK(max_abs_diff(das_unitary(d, vx()).matrix(), Matrix::Identity(2, 2)) < 1e-9);
  Matrix phase = Matrix::Identity(2, 2);
  phase(1, 1) = std::polar(1.0, 0.7);
  const UnitaryOperator pu(phase);
  CHECK(max_abs_diff(das_unitary(pu, vz()).matrix(), phase) < 1e-7);
  const auto dx = das_unitary(pu, vx());
  CHECK(vx().contains(dx.matrix(), {1e-7, 1e-7, 1e-7}));
  CHECK(max_abs_diff(dx.matrix() * dx.matrix().adjoint(), Matrix::Identity(2, 2)) < 1e-9);
  // Phases 0 and 0.7: the outer approximation in V_x is the larger phase.
  CHECK(max_abs_diff(dx.matrix(), std::polar(1.0, 0.7) * Matrix::Identity(2, 2)) < 1e-7);
}

TEST_CASE("direct sum translations") {
  const auto a1 = HermitianOperator::diagonal({1, 2});
  const auto a2 = HermitianOperator::diagonal({5, 7});
  const auto r = direct_sum_translate(a1, a2, vz());
  CHECK(r.equal);
  CHECK(max_abs_diff(r.translated, HermitianOperator::diagonal({1, 2, 7, 7}).matrix()) < 1e-12);
  const auto scalar = direct_sum_translate(a1, HermitianOperator::diagonal({4, 4}), vz());
  CHECK(scalar.equal);
  CHECK(max_abs_diff(scalar.direct.topLeftCorner(2, 2), a1.matrix()) < 1e-12);

  Rng rng(63);
  for (int t = 0; t < 30; ++t) {
    const int n1 = rng.integer(2, 3), n2 = rng.integer(2, 3);
    const Matrix b1 = random_unitary(rng, n1), b2 = random_unitary(rng, n2);
    const auto v1 = random_context(rng, b1, n1), v2 = random_context(rng, b2, n2);
    const auto x1 = random_hermitian(rng, related_basis(rng, b1));
    const auto x2 = random_hermitian(rng, related_basis(rng, b2));
    CHECK(direct_sum_lemma(x1, x2, v1, v2, DasMode::Outer).equal);
    CHECK(direct_sum_lemma(x1, x2, v1, v2, DasMode::Inner).equal);
    CHECK(direct_sum_translate(x1, x2, v1).equal);
  }
}

TEST_CASE("tensor floor") {
  const auto v1 = vz();
  const auto w1 = tensor_context(v1, Context::trivial(2));
  CHECK(tensor_floor(w1, 2, 2).id() == v1.id());
  const auto w2 = tensor_context(vx(), vz());
  CHECK(tensor_floor(w2, 2, 2).id() == vx().id());
  const auto bell = Projection::onto(vec({1, 0, 0, 1}));
  const auto wb = Context::from_blocks({bell, bell.complement()});
  CHECK(tensor_floor(wb, 2, 2).is_trivial());
  const auto v3 = diag_context({0, 1, 2});
  CHECK(tensor_floor(tensor_context(v3, vz()), 3, 2).id() == v3.id());
  CHECK(tensor_floor(tensor_context(diag_context({0, 0, 1}), vz()), 3, 2).id() == diag_context({0, 0, 1}).id());
}

TEST_CASE("tensor translation") {
  const auto a1 = HermitianOperator::diagonal({1, -1});
  const auto lifted = HermitianOperator(kron(a1.matrix(), Matrix::Identity(2, 2)));
  const auto w1 = tensor_context(vx(), Context::trivial(2));
  const auto t1 = tensor_translate(a1, w1, 2);
  CHECK(max_abs_diff(t1.matrix(), kron(outer_das_sa(a1, vx()).matrix(), Matrix::Identity(2, 2))) < 1e-12);
  CHECK(max_abs_diff(t1.matrix(), outer_das_sa(lifted, w1).matrix()) < 1e-9);
  const auto bell = Projection::onto(vec({1, 0, 0, 1}));
  const auto wb = Context::from_blocks({bell, bell.complement()});
  CHECK(max_abs_diff(tensor_translate(a1, wb, 2).matrix(), Matrix::Identity(4, 4)) < 1e-12);
  const auto w3 = tensor_context(vz(), vx());
  CHECK(max_abs_diff(tensor_translate(a1, w3, 2).matrix(), lifted.matrix()) < 1e-12);
}

TEST_CASE("translation gap search") {
  const auto a1 = HermitianOperator::diagonal({1, -1});
  const auto products = make_poset({tensor_context(vz(), vz()), tensor_context(vz(), vx()),
                                    tensor_context(vx(), vz()), tensor_context(vz(), Context::trivial(2))});
  const auto none = translation_gap_witness(a1, *products, 2);
  CHECK(none.records.size() == products->size());
  CHECK_FALSE(none.witness.has_value());
  CHECK_FALSE(translation_gap_witness(HermitianOperator::diagonal({2, 2}), *products, 2).witness.has_value());

  const auto mixed_vec = Projection::onto(vec({0, 0, 1, 0}));
  const auto phi = Projection::onto(vec({1, 0, 0, 1}));
  const auto mixed = Context::from_blocks({mixed_vec, phi, Projection(Matrix::Identity(4, 4) - mixed_vec.matrix() - phi.matrix())});
  const auto with_entangled = make_poset({tensor_context(vz(), vz()), mixed});
  const auto gap = translation_gap_witness(a1, *with_entangled, 2);
  CHECK(gap.records.size() == 2);
  REQUIRE(gap.witness.has_value());
  const auto& rec = gap.records[*gap.witness];
  CHECK(rec.floor.is_trivial());
  CHECK(spectral_order_leq(HermitianOperator(rec.comparison.direct), HermitianOperator(rec.comparison.translated)));
}

TEST_CASE("floor is monotone on composite posets") {
  const auto bell = Projection::onto(vec({1, 0, 0, 1}));
  const auto wb = Context::from_blocks({bell, bell.complement()});
  std::vector<Context> cs{tensor_context(vz(), vz()), tensor_context(vz(), Context::trivial(2)),
                          tensor_context(vx(), vz()), tensor_context(vx(), Context::trivial(2)), wb};
  const auto poset = make_poset(cs);
  for (std::size_t v = 0; v < poset->size(); ++v)
    for (std::size_t sub : poset->downset(v))
      CHECK(is_subcontext(tensor_floor(poset->at(sub), 2, 2), tensor_floor(poset->at(v), 2, 2)));
}
