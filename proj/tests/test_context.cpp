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
#include "tqt/context.hpp"

using namespace tqt;
using namespace tqt::test;

namespace {

/// Vp is a subalgebra of V iff each block of Vp lies in the span of V's
/// blocks, tested by least squares.
bool oracle_subalgebra(const Context& sub, const Context& v) {
  const int n = v.dim();
  Matrix basis(n * n, static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    basis.col(static_cast<Eigen::Index>(i)) = v.block(i).matrix().reshaped();
  for (const auto& q : sub.blocks()) {
    const Vector target = q.matrix().reshaped();
    const Vector c = basis.colPivHouseholderQr().solve(target);
    if ((basis * c - target).cwiseAbs().maxCoeff() > 1e-9) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("context validation") {
  TQT_CHECK_CODE(Context::from_blocks({dproj({1, 1, 0}), dproj({0, 1, 1})}), ErrorCode::InvalidArgument);
  TQT_CHECK_CODE(Context::from_blocks({Projection::identity(2)}), ErrorCode::TrivialContextExcluded);
  CHECK(Context::from_blocks({Projection::identity(2)}, {}, true).is_trivial());
  TQT_CHECK_CODE(Context::from_blocks({dproj({1, 0, 0}), dproj({0, 1, 0})}), ErrorCode::InvalidArgument);
}

TEST_CASE("contexts from commuting operators") {
  auto c1 = context_from_commuting({HermitianOperator::diagonal({1, 2, 3})});
  CHECK(c1.size() == 3);
  auto c2 = context_from_commuting({HermitianOperator::diagonal({1, 1, 2})});
  REQUIRE(c2.size() == 2);
  CHECK(c2.id() == diag_context({0, 0, 1}).id());
  auto c3 = context_from_commuting({HermitianOperator::diagonal({1, 1, 2}), HermitianOperator::diagonal({3, 4, 4})});
  CHECK(c3.id() == diag_context({0, 1, 2}).id());
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  TQT_CHECK_CODE(context_from_commuting({HermitianOperator::diagonal({1, -1}), HermitianOperator(x)}),
                 ErrorCode::IncommensurableOperators);
}

TEST_CASE("subcontext examples") {
  const auto v = diag_context({0, 1, 2});
  CHECK(is_subcontext(v, v));
  CHECK(is_subcontext(diag_context({0, 0, 1}), v));
  CHECK_FALSE(is_subcontext(v, diag_context({0, 0, 1})));
  Matrix h(2, 2);
  h << 0.5, 0.5, 0.5, 0.5;
  const auto vx = Context::from_blocks({Projection(h), Projection(h).complement()});
  CHECK_FALSE(is_subcontext(vx, diag_context({0, 1})));
  CHECK_FALSE(is_subcontext(diag_context({0, 1}), vx));
}

TEST_CASE("is_subcontext agrees with the span test") {
  Rng rng(21);
  for (int t = 0; t < 80; ++t) {
    const int n = rng.integer(2, 4);
    const Matrix b1 = random_unitary(rng, n);
    const auto v = random_context(rng, b1, n);
    const auto w = random_context(rng, related_basis(rng, b1), n);
    CHECK(is_subcontext(w, v) == oracle_subalgebra(w, v));
    for (const auto& c : coarsenings(v)) {
      CHECK(is_subcontext(c, v));
      CHECK(oracle_subalgebra(c, v));
    }
  }
}

TEST_CASE("coarsening counts") {
  CHECK(coarsenings(diag_context({0, 1})).empty());
  CHECK(coarsenings(diag_context({0, 1, 2})).size() == 3);
  CHECK(coarsenings(diag_context({0, 1, 2, 3})).size() == 13);
  CHECK(coarsenings(diag_context({0, 1, 2}), true).size() == 4);
  CHECK(set_partitions(4).size() == 15);
}

TEST_CASE("build_poset examples") {
  GenerationPolicy p1;
  p1.seeds = {{"Z", HermitianOperator::diagonal({1, -1})}};
  CHECK(build_poset(p1).size() == 1);

  GenerationPolicy p2;
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  p2.seeds = {{"Z", HermitianOperator::diagonal({1, -1})}, {"X", HermitianOperator(x)}};
  const auto two = build_poset(p2);
  REQUIRE(two.size() == 2);
  CHECK_FALSE(two.leq(0, 1));
  CHECK_FALSE(two.leq(1, 0));
  CHECK(two.downset(0).size() == 1);
  CHECK(two.downset(1).size() == 1);

  GenerationPolicy p3;
  p3.seeds = {{"A", HermitianOperator::diagonal({1, 2, 3})}};
  p3.closure = Closure::Coarsenings;
  const auto four = build_poset(p3);
  REQUIRE(four.size() == 4);
  CHECK(four.downset(four.resolve("A")).size() == 4);
  for (std::size_t v = 1; v < 4; ++v) CHECK(four.downset(v) == std::vector<std::size_t>{v});
}

TEST_CASE("downsets are closed and ids are stable") {
  GenerationPolicy p;
  p.seeds = {{"A", HermitianOperator::diagonal({1, 2, 3, 4})}, {"B", HermitianOperator::diagonal({1, 1, 2, 2})}};
  p.closure = Closure::Coarsenings;
  const auto a = build_poset(p);
  const auto b = build_poset(p);
  CHECK(a.fingerprint() == b.fingerprint());
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.at(i).id() == b.at(i).id());
  for (std::size_t v = 0; v < a.size(); ++v)
    for (std::size_t w : a.downset(v))
      for (std::size_t u : a.downset(w)) {
        const auto& d = a.downset(v);
        CHECK(std::find(d.begin(), d.end(), u) != d.end());
      }
}

TEST_CASE("parents are the dominating blocks") {
  const auto poset = dim3_coarsening_poset();
  for (std::size_t v = 0; v < poset->size(); ++v)
    for (std::size_t w : poset->downset(v)) {
      const auto& par = poset->parents(w, v);
      for (std::size_t b = 0; b < poset->at(v).size(); ++b)
        CHECK(proj_leq(poset->at(v).block(b), poset->at(w).block(par[b])));
    }
}

TEST_CASE("context meet and pairwise closure") {
  const auto m = context_meet(diag_context({0, 0, 1, 2}), diag_context({0, 1, 1, 2}));
  CHECK(m.id() == diag_context({0, 0, 0, 1}).id());
  CHECK(context_meet(diag_context({0, 1}), diag_context({0, 1})).size() == 2);
  GenerationPolicy p;
  Matrix h(2, 2);
  h << 0, 1, 1, 0;
  p.seeds = {{"Z", HermitianOperator(direct_sum(HermitianOperator::diagonal({1, -1}).matrix(), Matrix::Identity(1, 1) * 5))},
             {"X", HermitianOperator(direct_sum(h, Matrix::Identity(1, 1) * 5))}};
  p.closure = Closure::PairwiseMeets;
  const auto poset = build_poset(p);
  CHECK(poset.size() == 3);
}

TEST_CASE("labels and lookup") {
  auto poset = ContextPoset::from_contexts({diag_context({0, 1, 2})}, false);
  poset.add_label("V", 0);
  CHECK(poset.resolve("V") == 0);
  CHECK(poset.resolve(poset.at(0).id()) == 0);
  TQT_CHECK_CODE(poset.resolve("nope"), ErrorCode::ContextNotInPoset);
  TQT_CHECK_CODE(ContextPoset::from_contexts({}, false), ErrorCode::EmptyPoset);
}
