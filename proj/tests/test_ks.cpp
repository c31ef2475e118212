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


#include <cmath>
#include <sstream>

#include <doctest.h>

#include "support.hpp"
#include "tqt/ks.hpp"

using namespace tqt;
using namespace tqt::test;

namespace {

WitnessSet parse(const std::string& text) {
  std::istringstream in(text);
  return parse_witness(in, "test");
}

PosetPtr ks_poset(const WitnessSet& w) { return std::make_shared<const ContextPoset>(ks_poset_from_witness(w)); }

}  // namespace

TEST_CASE("witness parsing") {
  const auto w = parse("name t\ndim 3\n# comment\nray a = 1 0 0\nray b = 0 1/2 0\nray c = 0 0 -3  # tail\nbasis a b c\n");
  CHECK(w.name == "t");
  CHECK(w.dim == 3);
  REQUIRE(w.rays.size() == 3);
  CHECK(std::abs(w.rays[1].norm() - 1.0) < 1e-15);
  CHECK(w.bases.size() == 1);
  CHECK_NOTHROW(validate_witness(w));
  TQT_CHECK_CODE(parse("dim 3\nray a = 1 0\n"), ErrorCode::InvalidWitness);
  TQT_CHECK_CODE(parse("dim 3\nray a = 1 0 x\n"), ErrorCode::InvalidWitness);
  TQT_CHECK_CODE(parse("dim 2\nray a = 1 0\nbasis a z\n"), ErrorCode::InvalidWitness);
  TQT_CHECK_CODE(parse("colour red\n"), ErrorCode::InvalidWitness);
  TQT_CHECK_CODE(validate_witness(parse("dim 2\nray a = 1 0\nray b = 1 1\nbasis a b\n")), ErrorCode::InvalidWitness);
  TQT_CHECK_CODE(validate_witness(parse("dim 2\nray a = 1 0\nray b = 0 1\nray c = 1 1\nbasis a b\n")),
                 ErrorCode::InvalidWitness);
  TQT_CHECK_CODE(load_witness("/nonexistent/witness.txt"), ErrorCode::IoError);
}

TEST_CASE("poset from a witness") {
  const auto single = parse("dim 3\nray a = 1 0 0\nray b = 0 1 0\nray c = 0 0 1\nbasis a b c\n");
  const auto p1 = ks_poset_from_witness(single);
  CHECK(p1.size() == 4);
  TQT_CHECK_CODE(ks_poset_from_witness(parse("dim 3\n")), ErrorCode::EmptyPoset);

  const auto w = load_witness(bundled_witness_path("cabello18"));
  CHECK_NOTHROW(validate_witness(w));
  const auto poset = ks_poset(w);
  CHECK(poset->size() == 27);
  std::size_t maximal = 0;
  for (std::size_t v = 0; v < poset->size(); ++v) {
    if (poset->at(v).size() == 4) {
      ++maximal;
      continue;
    }
    CHECK(poset->at(v).size() == 2);
    CHECK(poset->upset(v).size() == 3);
  }
  CHECK(maximal == 9);
}

TEST_CASE("global section search") {
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  const auto zx = make_poset({diag_context({0, 1}), context_from_labels(h / std::sqrt(2.0), {0, 1})});
  const auto c1 = section_search(*spectral_presheaf(zx));
  CHECK(c1.found);
  CHECK(c1.sections == 4);
  CHECK(section_search(*spectral_presheaf(dim3_coarsening_poset())).sections == 3);

  const auto w = load_witness(bundled_witness_path("cabello18"));
  const auto poset = ks_poset(w);
  const auto cert = section_search(*spectral_presheaf(poset));
  CHECK_FALSE(cert.found);
  CHECK(cert.sections == 0);
  CHECK(cert.complete);
  CHECK(cert.nodes > 0);
  CHECK(cert.fingerprint == poset->fingerprint());
  const auto parity = parity_oracle(w);
  CHECK(parity.applies);
  CHECK(parity.basis_count == 9);
  for (auto i : parity.incidence) CHECK(i == 2);
  CHECK_FALSE(oracle_colourable(w.rays.size(), w.bases));
}

TEST_CASE("parity oracle does not apply to colourable sets") {
  const auto w = parse("dim 3\nray a = 1 0 0\nray b = 0 1 0\nray c = 0 0 1\nbasis a b c\n");
  CHECK_FALSE(parity_oracle(w).applies);
  CHECK(oracle_colourable(3, w.bases));
  CHECK(section_search(*spectral_presheaf(ks_poset(w))).found);
}

TEST_CASE("dual presheaf") {
  const auto two = make_poset({diag_context({0, 1})});
  CHECK(dual_presheaf(two)->fibre_size(0) == 2);
  const auto w = load_witness(bundled_witness_path("cabello18"));
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  const std::vector<PosetPtr> posets{two, dim3_coarsening_poset(), ks_poset(w),
                                     make_poset({diag_context({0, 1}), context_from_labels(h / std::sqrt(2.0), {0, 1})})};
  for (const auto& p : posets) {
    const auto dual = dual_presheaf(p);
    CHECK_FALSE(validate(*dual).has_value());
    for (std::size_t v = 0; v < p->size(); ++v) CHECK(dual->fibre_size(v) == p->at(v).size());
    CHECK(section_search(*dual).found == section_search(*spectral_presheaf(p)).found);
  }
}

TEST_CASE("Boolean daseinisation") {
  const auto b = diag_context({0, 1});
  CHECK(proj_equal(boolean_das(dproj({1, 0}), b), dproj({1, 0})));
  CHECK(boolean_das(Projection::onto(vec({1, 1})), b).rank() == 2);
  CHECK(boolean_das(Projection::zero(2), b).is_zero());
}

TEST_CASE("functional composition check") {
  const auto poset = dim3_coarsening_poset();
  const auto res = global_elements(*spectral_presheaf(poset));
  const std::vector<std::pair<std::string, HermitianOperator>> ops{{"A", HermitianOperator::diagonal({1, 2, 3})},
                                                                   {"B", HermitianOperator::diagonal({1, 1, 0})}};
  const NamedFunction square{"square", [](double x) { return x * x; }};
  const NamedFunction identity{"id", [](double x) { return x; }};
  for (const auto& s : res.sections) {
    CHECK_FALSE(func_check(*poset, s, ops, square).has_value());
    CHECK_FALSE(func_check(*poset, s, ops, identity).has_value());
  }
  // Pick e1 at the top but the e3 block at the coarsening merging e1 and e2.
  Section bad = res.sections.front();
  const std::size_t top = poset->resolve(diag_context({0, 1, 2}).id());
  const std::size_t merged = poset->resolve(diag_context({0, 0, 1}).id());
  for (std::size_t b = 0; b < 3; ++b)
    if (proj_equal(poset->at(top).block(b), dproj({1, 0, 0}))) bad[top] = b;
  for (std::size_t b = 0; b < 2; ++b)
    if (proj_equal(poset->at(merged).block(b), dproj({0, 0, 1}))) bad[merged] = b;
  const auto msg = func_check(*poset, bad, ops, square);
  REQUIRE(msg.has_value());
  CHECK(msg->find("B") != std::string::npos);
  Matrix x(3, 3);
  x << 0, 1, 0, 1, 0, 0, 0, 0, 0;
  TQT_CHECK_CODE(func_check(*poset, res.sections.front(), {{"X", HermitianOperator(x)}}, square),
                 ErrorCode::OperatorNotInScope);
}
