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

#include "tqt/dasein.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tqt {

double evaluate(const Context& v, std::size_t block, const Matrix& a, const TolerancePolicy& tol) {
  if (block >= v.size()) throw Error(ErrorCode::ElementNotInFibre, "block " + std::to_string(block));
  auto c = v.coefficients(a, tol);
  if (!c) throw Error(ErrorCode::InvalidArgument, "operator does not lie in context " + v.id());
  return (*c)[block].real();
}

PresheafPtr spectral_presheaf(PosetPtr poset) {
  const std::size_t n = poset->size();
  std::vector<std::size_t> sizes(n);
  for (std::size_t v = 0; v < n; ++v) sizes[v] = poset->at(v).size();
  auto p = std::make_shared<FinitePresheaf>(poset, sizes);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < sizes[v]; ++i) labels.push_back("b" + std::to_string(i));
    p->set_labels(v, std::move(labels));
    for (std::size_t sub : poset->downset(v))
      if (sub != v) p->set_restriction(v, sub, poset->parents(sub, v));
  }
  return p;
}

BlockMask outer_das_mask(const Projection& p, const Context& v, const TolerancePolicy& tol) {
  if (p.dim() != v.dim()) throw Error(ErrorCode::DimensionMismatch, "projection vs context");
  BlockMask m = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if ((v.block(i).matrix() * p.matrix()).cwiseAbs().maxCoeff() >= tol.eps_matrix) m |= BlockMask{1} << i;
  return m;
}

BlockMask inner_das_mask(const Projection& p, const Context& v, const TolerancePolicy& tol) {
  if (p.dim() != v.dim()) throw Error(ErrorCode::DimensionMismatch, "projection vs context");
  BlockMask m = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (proj_leq(v.block(i), p, tol)) m |= BlockMask{1} << i;
  return m;
}

Projection outer_das_proj(const Projection& p, const Context& v, const TolerancePolicy& tol) {
  return v.lattice_element(outer_das_mask(p, v, tol));
}

Projection inner_das_proj(const Projection& p, const Context& v, const TolerancePolicy& tol) {
  return v.lattice_element(inner_das_mask(p, v, tol));
}

namespace {

PresheafPtr lattice_presheaf(PosetPtr poset, DasMode mode) {
  const std::size_t n = poset->size();
  const TolerancePolicy& tol = poset->tolerance();
  std::vector<std::size_t> sizes(n);
  for (std::size_t v = 0; v < n; ++v) sizes[v] = std::size_t{1} << poset->at(v).size();
  auto p = std::make_shared<FinitePresheaf>(poset, sizes);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t sub : poset->downset(v)) {
      if (sub == v) continue;
      std::vector<std::size_t> map(sizes[v]);
      for (std::size_t m = 0; m < sizes[v]; ++m) {
        const Projection alpha = poset->at(v).lattice_element(m);
        map[m] = mode == DasMode::Outer ? outer_das_mask(alpha, poset->at(sub), tol)
                                        : inner_das_mask(alpha, poset->at(sub), tol);
      }
      p->set_restriction(v, sub, std::move(map));
    }
  return p;
}

}  // namespace

PresheafPtr outer_presheaf(PosetPtr poset) { return lattice_presheaf(std::move(poset), DasMode::Outer); }
PresheafPtr inner_presheaf(PosetPtr poset) { return lattice_presheaf(std::move(poset), DasMode::Inner); }

GlobalSectionOfG das_proj_global(const Projection& p, PosetPtr poset, const TolerancePolicy& tol) {
  GlobalSectionOfG s{poset, {}};
  for (std::size_t v = 0; v < poset->size(); ++v) s.values.push_back(outer_das_mask(p, poset->at(v), tol));
  return s;
}

bool is_outer_section(const GlobalSectionOfG& s, const TolerancePolicy& tol) {
  const ContextPoset& poset = *s.poset;
  for (std::size_t v = 0; v < poset.size(); ++v)
    for (std::size_t sub : poset.downset(v))
      if (outer_das_mask(s.at(v), poset.at(sub), tol) != s.values[sub]) return false;
  return true;
}

Projection section_meet(const GlobalSectionOfG& s, const TolerancePolicy& tol) {
  Projection out = Projection::identity(s.poset->dim());
  for (std::size_t v = 0; v < s.poset->size(); ++v) out = meet(out, s.at(v), tol);
  return out;
}

Subobject clopen_subobject(const Projection& p, const PresheafPtr& sigma, DasMode mode,
                           const TolerancePolicy& tol) {
  const ContextPoset& poset = sigma->poset();
  std::vector<std::vector<char>> sel(poset.size());
  for (std::size_t v = 0; v < poset.size(); ++v) {
    const Context& ctx = poset.at(v);
    const Projection das = mode == DasMode::Outer ? outer_das_proj(p, ctx, tol) : inner_das_proj(p, ctx, tol);
    const double target = mode == DasMode::Outer ? 1.0 : 0.0;
    for (std::size_t i = 0; i < ctx.size(); ++i)
      sel[v].push_back(std::abs(evaluate(ctx, i, das.matrix(), tol) - target) < tol.eps_prob);
  }
  return Subobject(sigma, std::move(sel));
}

Subobject subobject_of_section(const GlobalSectionOfG& s, const PresheafPtr& sigma) {
  const ContextPoset& poset = sigma->poset();
  std::vector<std::vector<char>> sel(poset.size());
  for (std::size_t v = 0; v < poset.size(); ++v)
    for (std::size_t i = 0; i < poset.at(v).size(); ++i) sel[v].push_back((s.values.at(v) >> i) & 1U);
  return Subobject(sigma, std::move(sel));
}

std::optional<SurjectivityFailure> restriction_surjectivity_check(const Subobject& s) {
  const FinitePresheaf& p = s.parent();
  const ContextPoset& poset = p.poset();
  for (std::size_t v = 0; v < poset.size(); ++v)
    for (std::size_t sub : poset.downset(v)) {
      if (sub == v) continue;
      std::vector<char> image(p.fibre_size(sub), 0);
      for (std::size_t x : s.fibre(v)) image[p.restrict(v, sub, x)] = 1;
      for (std::size_t y = 0; y < image.size(); ++y)
        if (static_cast<bool>(image[y]) != s.contains(sub, y)) return SurjectivityFailure{v, sub};
    }
  return std::nullopt;
}

HermitianOperator outer_das_sa(const HermitianOperator& a, const Context& v, const TolerancePolicy& tol) {
  if (a.dim() != v.dim()) throw Error(ErrorCode::DimensionMismatch, "operator vs context");
  const SpectralFamily fam = spectral_family(a, tol);
  std::vector<double> values(v.size(), 0.0);
  BlockMask seen = 0;
  for (std::size_t k = 0; k < fam.jumps().size(); ++k) {
    const BlockMask f = inner_das_mask(fam.cumulative()[k], v, tol);
    for (std::size_t i = 0; i < v.size(); ++i)
      if ((f >> i & 1U) && !(seen >> i & 1U)) values[i] = fam.jumps()[k];
    seen |= f;
  }
  return HermitianOperator(v.combine(values));
}

HermitianOperator inner_das_sa(const HermitianOperator& a, const Context& v, const TolerancePolicy& tol) {
  if (a.dim() != v.dim()) throw Error(ErrorCode::DimensionMismatch, "operator vs context");
  const SpectralFamily fam = spectral_family(a, tol);
  const auto& jumps = fam.jumps();
  std::vector<double> values(v.size(), 0.0);
  BlockMask seen = 0;
  for (std::size_t k = 0; k < jumps.size(); ++k) {
    // The right limit at jumps[k] is the value on (jumps[k], jumps[k+1]),
    // sampled at the midpoint.
    const double probe = k + 1 < jumps.size() ? 0.5 * (jumps[k] + jumps[k + 1]) : jumps[k] + 1.0;
    const BlockMask g = outer_das_mask(fam.at(probe), v, tol);
    for (std::size_t i = 0; i < v.size(); ++i)
      if ((g >> i & 1U) && !(seen >> i & 1U)) values[i] = jumps[k];
    seen |= g;
  }
  return HermitianOperator(v.combine(values));
}

Subobject clopen_heyting(HeytingOp op, const Subobject& s, const Subobject& t) {
  return subobject_heyting(op, s, t);
}

DeGrooteTable degroote_table(const HermitianOperator& a, const ContextPoset& poset, const TolerancePolicy& tol) {
  DeGrooteTable t;
  for (std::size_t v = 0; v < poset.size(); ++v) {
    t.outer.push_back(outer_das_sa(a, poset.at(v), tol));
    t.inner.push_back(inner_das_sa(a, poset.at(v), tol));
  }
  return t;
}

std::optional<std::string> validate_degroote(const DeGrooteTable& t, const ContextPoset& poset,
                                             const TolerancePolicy& tol) {
  for (std::size_t v = 0; v < poset.size(); ++v)
    for (std::size_t sub : poset.downset(v)) {
      if (!approx_equal(outer_das_sa(t.outer[v], poset.at(sub), tol).matrix(), t.outer[sub].matrix(), tol.eps_matrix))
        return "outer table incompatible along " + poset.at(v).id() + " -> " + poset.at(sub).id();
      if (!approx_equal(inner_das_sa(t.inner[v], poset.at(sub), tol).matrix(), t.inner[sub].matrix(), tol.eps_matrix))
        return "inner table incompatible along " + poset.at(v).id() + " -> " + poset.at(sub).id();
    }
  return std::nullopt;
}

bool tables_equal(const std::vector<HermitianOperator>& a, const std::vector<HermitianOperator>& b, double eps) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!approx_equal(a[i].matrix(), b[i].matrix(), eps)) return false;
  return true;
}

namespace {

HermitianOperator spectral_lattice_op(const std::vector<HermitianOperator>& ops, LatticeOp combine,
                                      const TolerancePolicy& tol) {
  if (ops.empty()) throw Error(ErrorCode::InvalidArgument, "no operators");
  const int dim = ops.front().dim();
  std::vector<SpectralFamily> fams;
  std::vector<double> points;
  for (const auto& a : ops) {
    if (a.dim() != dim) throw Error(ErrorCode::DimensionMismatch, "spectral lattice operation");
    fams.push_back(spectral_family(a, tol));
    points.insert(points.end(), fams.back().jumps().begin(), fams.back().jumps().end());
  }
  std::sort(points.begin(), points.end());
  std::vector<double> jumps;
  std::vector<Projection> cumulative;
  Projection prev = Projection::zero(dim);
  for (std::size_t k = 0; k < points.size();) {
    std::size_t end = k;
    while (end + 1 < points.size() && points[end + 1] - points[k] <= tol.eps_eig) ++end;
    const double probe = points[end] + 0.5 * tol.eps_eig;
    Projection value = fams.front().at(probe);
    for (std::size_t f = 1; f < fams.size(); ++f) value = projection_meet_join(value, fams[f].at(probe), combine, tol);
    if (!proj_equal(value, prev, tol)) {
      jumps.push_back(points[k]);
      cumulative.push_back(value);
      prev = value;
    }
    k = end + 1;
  }
  return SpectralFamily(std::move(jumps), std::move(cumulative), tol).integrate();
}

}  // namespace

HermitianOperator spectral_meet(const std::vector<HermitianOperator>& ops, const TolerancePolicy& tol) {
  return spectral_lattice_op(ops, LatticeOp::Join, tol);
}

HermitianOperator spectral_join(const std::vector<HermitianOperator>& ops, const TolerancePolicy& tol) {
  return spectral_lattice_op(ops, LatticeOp::Meet, tol);
}

Sieve iota_sieve(BlockMask alpha, std::size_t v, std::size_t block, const ContextPoset& poset,
                 const TolerancePolicy& tol) {
  if (v >= poset.size()) throw Error(ErrorCode::ContextNotInPoset, std::to_string(v));
  const Context& home = poset.at(v);
  if (block >= home.size()) throw Error(ErrorCode::ElementNotInFibre, "block " + std::to_string(block));
  if (alpha > home.full_mask()) throw Error(ErrorCode::InvalidArgument, "mask exceeds the context lattice");
  const Projection a = home.lattice_element(alpha);
  Sieve out{v, {}};
  for (std::size_t sub : poset.downset(v)) {
    const std::size_t restricted = poset.parents(sub, v)[block];
    if (outer_das_mask(a, poset.at(sub), tol) >> restricted & 1U) out.members.push_back(sub);
  }
  std::sort(out.members.begin(), out.members.end());
  return out;
}

Sieve equality_sieve(std::size_t v, std::size_t b1, std::size_t b2, const ContextPoset& poset) {
  if (v >= poset.size()) throw Error(ErrorCode::ContextNotInPoset, std::to_string(v));
  if (b1 >= poset.at(v).size() || b2 >= poset.at(v).size())
    throw Error(ErrorCode::StageMismatch, "spectral elements do not both live at the stage");
  Sieve out{v, {}};
  for (std::size_t sub : poset.downset(v)) {
    const auto& par = poset.parents(sub, v);
    if (par[b1] == par[b2]) out.members.push_back(sub);
  }
  std::sort(out.members.begin(), out.members.end());
  return out;
}

}  // namespace tqt
