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

#include "tqt/truth.hpp"

#include <cmath>

namespace tqt {

double probability(const State& s, const Projection& p) {
  if (state_dim(s) != p.dim()) throw Error(ErrorCode::DimensionMismatch, "state vs projection");
  if (const auto* psi = std::get_if<StateVector>(&s)) return p.op().expectation(psi->amplitudes());
  const auto& rho = std::get<DensityMatrix>(s);
  return (rho.op().matrix() * p.matrix()).trace().real();
}

int state_dim(const State& s) {
  return std::visit([](const auto& x) { return x.dim(); }, s);
}

std::vector<BlockMask> TruthObject::fibre(std::size_t v) const {
  std::vector<BlockMask> out;
  for (BlockMask m = 0; m < member.at(v).size(); ++m)
    if (member[v][m]) out.push_back(m);
  return out;
}

Subobject TruthObject::as_subobject(const PresheafPtr& outer) const { return Subobject(outer, member); }

TruthObject truth_object(const State& s, PosetPtr poset, const TolerancePolicy& tol) {
  if (state_dim(s) != poset->dim()) throw Error(ErrorCode::DimensionMismatch, "state vs poset");
  TruthObject t{poset, std::vector<std::vector<char>>(poset->size())};
  for (std::size_t v = 0; v < poset->size(); ++v) {
    const Context& ctx = poset->at(v);
    for (BlockMask m = 0; m <= ctx.full_mask(); ++m)
      t.member[v].push_back(std::abs(probability(s, ctx.lattice_element(m)) - 1.0) < tol.eps_prob);
  }
  return t;
}

std::optional<std::string> validate_truth_object(const TruthObject& t, const TolerancePolicy& tol) {
  const ContextPoset& poset = *t.poset;
  for (std::size_t v = 0; v < poset.size(); ++v) {
    const Context& ctx = poset.at(v);
    const std::string at = " at " + ctx.id();
    if (t.contains(v, 0)) return "fibre contains 0" + at;
    if (!t.contains(v, ctx.full_mask())) return "fibre misses the identity" + at;
    for (BlockMask a = 0; a <= ctx.full_mask(); ++a) {
      if (!t.contains(v, a)) continue;
      for (BlockMask b = 0; b <= ctx.full_mask(); ++b) {
        if ((a & b) == a && !t.contains(v, b)) return "fibre not upward closed" + at;
        if (t.contains(v, b) && !t.contains(v, a & b)) return "fibre not closed under meets" + at;
      }
      for (std::size_t sub : poset.downset(v))
        if (!t.contains(sub, outer_das_mask(ctx.lattice_element(a), poset.at(sub), tol)))
          return "daseinisation leaves the fibre" + at + " -> " + poset.at(sub).id();
    }
  }
  return std::nullopt;
}

PseudoState pseudo_state(const StateVector& psi, const PresheafPtr& sigma, const TolerancePolicy& tol) {
  GlobalSectionOfG section = das_proj_global(psi.projector(), sigma->poset_ptr(), tol);
  Subobject clopen = subobject_of_section(section, sigma);
  return PseudoState{std::move(section), std::move(clopen)};
}

TruthObject recover_truth_object(const PseudoState& w) {
  const ContextPoset& poset = *w.section.poset;
  TruthObject t{w.section.poset, std::vector<std::vector<char>>(poset.size())};
  for (std::size_t v = 0; v < poset.size(); ++v) {
    const BlockMask wv = w.section.values[v];
    for (BlockMask m = 0; m <= poset.at(v).full_mask(); ++m) t.member[v].push_back((m & wv) == wv);
  }
  return t;
}

std::vector<double> truth_probabilities(const Projection& p, const State& s, std::size_t v,
                                        const ContextPoset& poset, const TolerancePolicy& tol) {
  if (v >= poset.size()) throw Error(ErrorCode::ContextNotInPoset, std::to_string(v));
  std::vector<double> out;
  for (std::size_t sub : poset.downset(v)) out.push_back(probability(s, outer_das_proj(p, poset.at(sub), tol)));
  return out;
}

Sieve truth_value(const Projection& p, const State& s, std::size_t v, const ContextPoset& poset,
                  const TolerancePolicy& tol) {
  const auto probs = truth_probabilities(p, s, v, poset, tol);
  const auto& down = poset.downset(v);
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < down.size(); ++i)
    if (std::abs(probs[i] - 1.0) < tol.eps_prob) members.push_back(down[i]);
  return make_sieve(poset, v, std::move(members));
}

Sieve truth_value_subset(const Projection& p, const PseudoState& w, std::size_t v, const ContextPoset& poset,
                         const TolerancePolicy& tol) {
  if (v >= poset.size()) throw Error(ErrorCode::ContextNotInPoset, std::to_string(v));
  std::vector<std::size_t> members;
  for (std::size_t sub : poset.downset(v)) {
    const BlockMask d = outer_das_mask(p, poset.at(sub), tol);
    const BlockMask wv = w.section.values.at(sub);
    if ((wv & d) == wv) members.push_back(sub);
  }
  return make_sieve(poset, v, std::move(members));
}

bool Filter::contains(const Projection& r, const TolerancePolicy& tol) const {
  if (scope && !scope->mask_of(r, tol)) return false;
  return proj_leq(generator, r, tol);
}

Filter context_filter(const Context& v, const std::vector<BlockMask>& generators) {
  if (generators.empty()) throw Error(ErrorCode::EmptyFilter, "no generators");
  BlockMask m = v.full_mask();
  for (BlockMask g : generators) {
    if (g > v.full_mask()) throw Error(ErrorCode::InvalidArgument, "generator outside the context lattice");
    m &= g;
  }
  if (m == 0) throw Error(ErrorCode::EmptyFilter, "generators meet in 0; the filter is not proper");
  return Filter{v.lattice_element(m), v};
}

std::vector<Filter> all_context_filters(const Context& v) {
  std::vector<Filter> out;
  for (BlockMask m = 1; m <= v.full_mask(); ++m) out.push_back(Filter{v.lattice_element(m), v});
  return out;
}

std::vector<BlockMask> filter_members(const Filter& f, const TolerancePolicy& tol) {
  if (!f.scope) throw Error(ErrorCode::InvalidArgument, "filter has no finite scope");
  std::vector<BlockMask> out;
  for (BlockMask m = 1; m <= f.scope->full_mask(); ++m)
    if (f.contains(f.scope->lattice_element(m), tol)) out.push_back(m);
  return out;
}

Filter cone(const Filter& f) { return Filter{f.generator, std::nullopt}; }

Filter quasi_point(const StateVector& psi) { return Filter{psi.projector(), std::nullopt}; }

namespace {

void require_proper(const Filter& f, const HermitianOperator& a) {
  if (f.generator.is_zero()) throw Error(ErrorCode::EmptyFilter, "filter contains 0");
  if (f.generator.dim() != a.dim()) throw Error(ErrorCode::DimensionMismatch, "operator vs filter");
}

}  // namespace

double observable_fn(const HermitianOperator& a, const Filter& f, const TolerancePolicy& tol) {
  require_proper(f, a);
  const Filter c = cone(f);
  const SpectralFamily fam = spectral_family(a, tol);
  for (std::size_t k = 0; k < fam.jumps().size(); ++k)
    if (c.contains(fam.cumulative()[k], tol)) return fam.jumps()[k];
  return fam.jumps().back();
}

double antonymous_fn(const HermitianOperator& a, const Filter& f, const TolerancePolicy& tol) {
  require_proper(f, a);
  const Filter c = cone(f);
  const SpectralFamily fam = spectral_family(a, tol);
  std::size_t next = 0;  // index of lambda_{m+1}
  for (std::size_t k = 0; k + 1 < fam.jumps().size(); ++k)
    if (c.contains(fam.cumulative()[k].complement(), tol)) next = k + 1;
  return fam.jumps()[next];
}

Bracket expectation_bracket(const HermitianOperator& a, const StateVector& psi, const TolerancePolicy& tol) {
  const Filter t = quasi_point(psi);
  return Bracket{antonymous_fn(a, t, tol), a.expectation(psi.amplitudes()), observable_fn(a, t, tol)};
}

}  // namespace tqt
