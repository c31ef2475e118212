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


#include <doctest.h>

#include "support.hpp"
#include "tqt/opalg.hpp"

using namespace tqt;
using namespace tqt::test;

namespace {

Matrix half_ones() {
  Matrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  return m;
}

}  // namespace

TEST_CASE("hermitian input is validated") {
  Matrix m(2, 2);
  m << 1, Complex(0, 1), Complex(0, 1), 1;
  CHECK_THROWS_AS(HermitianOperator{m}, Error);
  try {
    HermitianOperator{m};
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonHermitianInput);
  }
  Matrix p(2, 2);
  p << 1, 0, 0, 2;
  CHECK_THROWS_AS(Projection{p}, Error);
}

TEST_CASE("spectral decomposition examples") {
  auto d = spectral_decompose(HermitianOperator::diagonal({1, 2, 3}));
  REQUIRE(d.eigenvalues.size() == 3);
  CHECK(d.eigenvalues[0] == doctest::Approx(1));
  CHECK(d.eigenvalues[2] == doctest::Approx(3));
  CHECK(proj_equal(d.eigenprojections[0], dproj({1, 0, 0})));
  CHECK(proj_equal(d.eigenprojections[1], dproj({0, 1, 0})));

  auto id = spectral_decompose(HermitianOperator::identity(2));
  REQUIRE(id.eigenvalues.size() == 1);
  CHECK(id.eigenvalues[0] == doctest::Approx(1));
  CHECK(id.eigenprojections[0].rank() == 2);

  auto h = spectral_decompose(HermitianOperator(half_ones()));
  REQUIRE(h.eigenvalues.size() == 2);
  CHECK(std::abs(h.eigenvalues[0]) < 1e-12);
  CHECK(proj_equal(h.eigenprojections[0], Projection::onto(vec({1, -1}))));
  CHECK(proj_equal(h.eigenprojections[1], Projection::onto(vec({1, 1}))));
}

TEST_CASE("spectral family examples") {
  auto f = spectral_family(HermitianOperator::diagonal({1, 2, 3}));
  REQUIRE(f.jumps() == std::vector<double>{1, 2, 3});
  CHECK(proj_equal(f.cumulative()[0], dproj({1, 0, 0})));
  CHECK(proj_equal(f.cumulative()[1], dproj({1, 1, 0})));
  CHECK(proj_equal(f.cumulative()[2], Projection::identity(3)));
  CHECK(f.at(0.5).is_zero());
  CHECK(proj_equal(f.at(2.5), dproj({1, 1, 0})));

  auto z = spectral_family(HermitianOperator::zero(2));
  REQUIRE(z.jumps().size() == 1);
  CHECK(z.jumps()[0] == 0.0);
  CHECK(z.cumulative()[0].rank() == 2);

  const Projection px(half_ones());
  auto fp = spectral_family(px.op());
  CHECK(fp.at(-0.1).is_zero());
  CHECK(proj_equal(fp.at(0.0), px.complement()));
  CHECK(proj_equal(fp.at(0.99), px.complement()));
  CHECK(fp.at(1.0).rank() == 2);
}

TEST_CASE("spectral families reconstruct and are monotone") {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const int n = rng.integer(2, 4);
    const auto a = random_hermitian(rng, random_unitary(rng, n));
    const auto f = spectral_family(a);
    CHECK(max_abs_diff(f.integrate().matrix(), a.matrix()) < 1e-9);
    for (std::size_t k = 1; k < f.cumulative().size(); ++k)
      CHECK(proj_leq(f.cumulative()[k - 1], f.cumulative()[k]));
    CHECK(f.cumulative().back().rank() == n);
  }
}

TEST_CASE("spectral order examples") {
  const auto a = HermitianOperator::diagonal({1, 2, 3});
  CHECK(spectral_order_leq(a, a));
  CHECK(spectral_order_leq(HermitianOperator::diagonal({1, 1, 3}), a));
  CHECK_FALSE(spectral_order_leq(a, HermitianOperator::diagonal({1, 1, 3})));
}

TEST_CASE("spectral order is a partial order that refines the usual order") {
  Rng rng(12);
  std::vector<HermitianOperator> ops;
  for (int t = 0; t < 24; ++t) {
    const Matrix base = t % 2 ? Matrix::Identity(3, 3).eval() : random_unitary(rng, 3);
    ops.push_back(random_hermitian(rng, related_basis(rng, base)));
  }
  int comparable = 0;
  for (const auto& a : ops) {
    CHECK(spectral_order_leq(a, a));
    for (const auto& b : ops) {
      const bool ab = spectral_order_leq(a, b);
      CHECK(ab == oracle_spectral_leq(a.matrix(), b.matrix()));
      if (ab && spectral_order_leq(b, a)) CHECK(max_abs_diff(a.matrix(), b.matrix()) < 1e-7);
      if (!ab) continue;
      ++comparable;
      for (const auto& c : ops)
        if (spectral_order_leq(b, c)) CHECK(spectral_order_leq(a, c));
      for (int k = 0; k < 100; ++k) {
        const Vector psi = random_state(rng, 3).amplitudes();
        CHECK(a.expectation(psi) <= b.expectation(psi) + 1e-9);
      }
    }
  }
  CHECK(comparable > static_cast<int>(ops.size()));
}

TEST_CASE("meet and join examples") {
  const Projection p(half_ones());
  CHECK(meet(p, p.complement()).is_zero());
  CHECK(proj_equal(join(dproj({1, 0, 0}), dproj({0, 1, 0})), dproj({1, 1, 0})));
  CHECK(proj_equal(join(p, p), p));
  CHECK(proj_equal(meet(dproj({1, 1, 0}), dproj({0, 1, 1})), dproj({0, 1, 0})));
}

TEST_CASE("proposition projector examples") {
  const auto a = HermitianOperator::diagonal({1, 2, 3});
  CHECK(proj_equal(proposition_projector(a, {1.5, 3}), dproj({0, 1, 1})));
  CHECK(proposition_projector(a, {4, 5}).is_zero());
  CHECK(proposition_projector(a, {0, 3}).rank() == 3);
}

TEST_CASE("proposition projectors of intersections are meets") {
  Rng rng(13);
  for (int t = 0; t < 60; ++t) {
    const auto a = random_hermitian(rng, random_unitary(rng, 3));
    double l1 = rng.integer(-4, 4) + 0.5 * rng.integer(0, 1), h1 = l1 + rng.integer(0, 4);
    double l2 = rng.integer(-4, 4) + 0.5 * rng.integer(0, 1), h2 = l2 + rng.integer(0, 4);
    const auto lhs = std::max(l1, l2) <= std::min(h1, h2)
                         ? proposition_projector(a, {std::max(l1, l2), std::min(h1, h2)})
                         : Projection::zero(3);
    const auto rhs = meet(proposition_projector(a, {l1, h1}), proposition_projector(a, {l2, h2}));
    CHECK(proj_equal(lhs, rhs, {1e-7, 1e-7, 1e-7}));
  }
}

TEST_CASE("tolerance policy validation") {
  CHECK_NOTHROW(TolerancePolicy{}.validate());
  CHECK_THROWS_AS((TolerancePolicy{1e-6, 1e-9, 1e-7}.validate()), Error);
  CHECK_THROWS_AS((TolerancePolicy{-1, 1e-7, 1e-7}.validate()), Error);
}

TEST_CASE("states and density matrices") {
  CHECK_THROWS_AS(StateVector(vec({1, 1})), Error);
  const auto s = StateVector::normalized(vec({1, 1}));
  CHECK(s.projector().rank() == 1);
  const auto rho = DensityMatrix::maximally_mixed(3);
  CHECK(rho.op().matrix().trace().real() == doctest::Approx(1));
  CHECK_THROWS_AS(DensityMatrix(HermitianOperator::diagonal({1, 1})), Error);
  CHECK_THROWS_AS(DensityMatrix(HermitianOperator::diagonal({1.5, -0.5})), Error);
}

TEST_CASE("kron and direct sum") {
  const Matrix z = HermitianOperator::diagonal({1, -1}).matrix();
  const Matrix k = kron(z, Matrix::Identity(2, 2));
  CHECK(max_abs_diff(k, HermitianOperator::diagonal({1, 1, -1, -1}).matrix()) == 0.0);
  const Matrix d = direct_sum(z, Matrix::Identity(1, 1));
  CHECK(max_abs_diff(d, HermitianOperator::diagonal({1, -1, 1}).matrix()) == 0.0);
}
