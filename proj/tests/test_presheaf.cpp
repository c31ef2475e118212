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
#include "tqt/dasein.hpp"
#include "tqt/presheaf.hpp"

using namespace tqt;
using namespace tqt::test;

namespace {

/// Sieves on v by testing every subset of the downset for downward closure.
std::set<std::vector<std::size_t>> oracle_sieves(const ContextPoset& poset, std::size_t v) {
  const auto& d = poset.downset(v);
  std::set<std::vector<std::size_t>> out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << d.size()); ++s) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (s >> i & 1U) members.push_back(d[i]);
    bool closed = true;
    for (std::size_t m : members)
      for (std::size_t w : poset.downset(m))
        if (std::find(members.begin(), members.end(), w) == members.end()) closed = false;
    if (!closed) continue;
    std::sort(members.begin(), members.end());
    out.insert(members);
  }
  return out;
}

/// Four-block diagonal context with a downset of five elements.
PosetPtr five_downset_poset() {
  return make_poset({diag_context({0, 1, 2, 3}), diag_context({0, 0, 1, 2}), diag_context({0, 1, 2, 2}),
                     diag_context({0, 0, 1, 1}), diag_context({0, 1, 1, 1})});
}

}  // namespace

TEST_CASE("sieve counts") {
  const auto single = make_poset({diag_context({0, 1})});
  CHECK(sieves_on(*single, 0).size() == 2);
  const auto chain = make_poset({diag_context({0, 1, 2}), diag_context({0, 0, 1})});
  CHECK(sieves_on(*chain, chain->resolve(diag_context({0, 1, 2}).id())).size() == 3);
  const auto vee = make_poset({diag_context({0, 1, 2}), diag_context({0, 0, 1}), diag_context({0, 1, 1})});
  CHECK(sieves_on(*vee, vee->resolve(diag_context({0, 1, 2}).id())).size() == 5);
}

TEST_CASE("sieves_on matches subset enumeration") {
  for (const auto& poset : {five_downset_poset(), dim3_coarsening_poset()})
    for (std::size_t v = 0; v < poset->size(); ++v) {
      std::set<std::vector<std::size_t>> got;
      for (const auto& s : sieves_on(*poset, v)) got.insert(s.members);
      CHECK(got == oracle_sieves(*poset, v));
    }
}

TEST_CASE("sieve pullback examples") {
  const auto poset = make_poset({diag_context({0, 1, 2, 3}), diag_context({0, 0, 1, 2}), diag_context({0, 0, 0, 1})});
  const std::size_t v = poset->resolve(diag_context({0, 1, 2, 3}).id());
  const std::size_t vp = poset->resolve(diag_context({0, 0, 1, 2}).id());
  const std::size_t vm = poset->resolve(diag_context({0, 0, 0, 1}).id());
  CHECK(sieve_pullback(*poset, principal_sieve(*poset, v), vp) == principal_sieve(*poset, vp));
  CHECK(sieve_pullback(*poset, empty_sieve(v), vp).empty());
  const auto s = make_sieve(*poset, v, {vm});
  CHECK(sieve_pullback(*poset, s, vp).members == std::vector<std::size_t>{vm});
  TQT_CHECK_CODE(make_sieve(*poset, v, {vp}), ErrorCode::InvalidArgument);
}

TEST_CASE("negation examples") {
  const auto poset = five_downset_poset();
  CHECK(sieve_not(*poset, empty_sieve(0)) == principal_sieve(*poset, 0));
  CHECK(sieve_not(*poset, principal_sieve(*poset, 0)).empty());
}

TEST_CASE("sieve Heyting algebra laws are exhaustive at small stages") {
  bool strict_double_negation = false, excluded_middle_fails = false;
  for (const auto& poset : {five_downset_poset(), dim3_coarsening_poset()})
    for (std::size_t v = 0; v < poset->size(); ++v) {
      REQUIRE(poset->downset(v).size() <= 5);
      const auto all = sieves_on(*poset, v);
      const auto top = principal_sieve(*poset, v);
      for (const auto& s : all) {
        const auto ns = sieve_not(*poset, s);
        const auto nns = sieve_not(*poset, ns);
        CHECK(sieve_leq(s, nns));
        if (!(nns == s)) strict_double_negation = true;
        if (!(sieve_heyting(*poset, HeytingOp::Or, s, ns) == top)) excluded_middle_fails = true;
        for (const auto& t : all) {
          const auto imp = sieve_heyting(*poset, HeytingOp::Implies, s, t);
          for (const auto& r : all) {
            CHECK(sieve_leq(r, imp) == sieve_leq(sieve_heyting(*poset, HeytingOp::And, r, s), t));
            const auto lhs = sieve_heyting(*poset, HeytingOp::And, r, sieve_heyting(*poset, HeytingOp::Or, s, t));
            const auto rhs = sieve_heyting(*poset, HeytingOp::Or, sieve_heyting(*poset, HeytingOp::And, r, s),
                                           sieve_heyting(*poset, HeytingOp::And, r, t));
            CHECK(lhs == rhs);
          }
        }
      }
    }
  CHECK(strict_double_negation);
  CHECK(excluded_middle_fails);
}

TEST_CASE("pullback commutes with the connectives") {
  const auto poset = five_downset_poset();
  for (std::size_t v = 0; v < poset->size(); ++v)
    for (std::size_t sub : poset->downset(v)) {
      const auto all = sieves_on(*poset, v);
      for (const auto& s : all)
        for (const auto& t : all) {
          auto pb = [&](const Sieve& x) { return sieve_pullback(*poset, x, sub); };
          CHECK(pb(sieve_heyting(*poset, HeytingOp::And, s, t)) == sieve_heyting(*poset, HeytingOp::And, pb(s), pb(t)));
          CHECK(pb(sieve_heyting(*poset, HeytingOp::Or, s, t)) == sieve_heyting(*poset, HeytingOp::Or, pb(s), pb(t)));
          CHECK(sieve_leq(pb(sieve_heyting(*poset, HeytingOp::Implies, s, t)),
                          sieve_heyting(*poset, HeytingOp::Implies, pb(s), pb(t))));
        }
    }
}

TEST_CASE("presheaf validation") {
  const auto poset = dim3_coarsening_poset();
  CHECK_FALSE(validate(constant_presheaf(poset)).has_value());
  const auto sigma = spectral_presheaf(poset);
  CHECK_FALSE(validate(*sigma).has_value());

  const auto chain = make_poset({diag_context({0, 1, 2, 3}), diag_context({0, 0, 1, 2}), diag_context({0, 0, 0, 1})});
  FinitePresheaf p(chain, {2, 2, 2});
  p.set_restriction(0, 1, {0, 1});
  p.set_restriction(1, 2, {0, 1});
  p.set_restriction(0, 2, {1, 0});
  const auto bad = validate(p);
  REQUIRE(bad.has_value());
  CHECK(bad->chain.size() == 3);
}

TEST_CASE("global sections") {
  const auto poset = dim3_coarsening_poset();
  CHECK(global_elements(constant_presheaf(poset)).sections.size() == 1);
  const auto res = global_elements(*spectral_presheaf(poset));
  CHECK(res.sections.size() == 3);
  CHECK(res.complete);
  for (const auto& s : res.sections) CHECK(is_global_section(*spectral_presheaf(poset), s));
  const auto limited = global_elements(*spectral_presheaf(poset), 1);
  CHECK(limited.sections.size() == 1);
  CHECK_FALSE(limited.complete);
}

TEST_CASE("characteristic arrows") {
  const auto poset = dim3_coarsening_poset();
  const auto sigma = spectral_presheaf(poset);
  const auto k = clopen_subobject(dproj({1, 0, 0}), sigma, DasMode::Outer);
  const std::size_t top = poset->resolve(diag_context({0, 1, 2}).id());
  for (std::size_t v = 0; v < poset->size(); ++v)
    for (std::size_t x = 0; x < sigma->fibre_size(v); ++x) {
      const auto s = characteristic_arrow(k, v, x);
      if (k.contains(v, x)) CHECK(s == principal_sieve(*poset, v));
    }
  // e2 is outside at the top but enters at the coarsening merging e1 and e2.
  const std::size_t merged = poset->resolve(diag_context({0, 0, 1}).id());
  std::size_t e2 = 0;
  for (std::size_t b = 0; b < poset->at(top).size(); ++b)
    if (proj_equal(poset->at(top).block(b), dproj({0, 1, 0}))) e2 = b;
  CHECK(characteristic_arrow(k, top, e2).members == principal_sieve(*poset, merged).members);

  const auto none = Subobject::empty(sigma);
  for (std::size_t v = 0; v < poset->size(); ++v)
    for (std::size_t x = 0; x < sigma->fibre_size(v); ++x) CHECK(characteristic_arrow(none, v, x).empty());

  for (const auto& s : all_subobjects(sigma)) CHECK(subobject_from_characteristic(sigma, characteristic_table(s)) == s);
}

TEST_CASE("subobject closure is enforced") {
  const auto poset = dim3_coarsening_poset();
  const auto sigma = spectral_presheaf(poset);
  std::vector<std::vector<char>> sel(poset->size());
  for (std::size_t v = 0; v < poset->size(); ++v) sel[v].assign(sigma->fibre_size(v), 0);
  sel[poset->resolve(diag_context({0, 1, 2}).id())][0] = 1;
  CHECK(closure_violation(*sigma, sel).has_value());
  TQT_CHECK_CODE(Subobject(sigma, sel), ErrorCode::InvalidArgument);
}

TEST_CASE("natural transformation validation") {
  const auto poset = dim3_coarsening_poset();
  const auto sigma = spectral_presheaf(poset);
  const auto one = std::make_shared<const FinitePresheaf>(constant_presheaf(poset));
  NaturalTransformation n{sigma, one, {}};
  for (std::size_t v = 0; v < poset->size(); ++v) n.components.emplace_back(sigma->fibre_size(v), 0);
  CHECK_FALSE(validate_naturality(n).has_value());
  NaturalTransformation id{sigma, sigma, {}};
  for (std::size_t v = 0; v < poset->size(); ++v) {
    id.components.emplace_back();
    for (std::size_t x = 0; x < sigma->fibre_size(v); ++x) id.components.back().push_back(x);
  }
  CHECK_FALSE(validate_naturality(id).has_value());
  std::swap(id.components[0][0], id.components[0][1]);
  CHECK(validate_naturality(id).has_value());
}
