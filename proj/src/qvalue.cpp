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

#include "tqt/qvalue.hpp"

#include <algorithm>
#include <cmath>

namespace tqt {

DownsetFn::DownsetFn(const ContextPoset& poset, std::size_t stage, std::vector<double> values)
    : stage_(stage), domain_(poset.downset(stage)), values_(std::move(values)) {
  if (values_.size() != domain_.size())
    throw Error(ErrorCode::InvalidArgument, "function needs one value per context below the stage");
}

DownsetFn DownsetFn::constant(const ContextPoset& poset, std::size_t stage, double c) {
  return DownsetFn(poset, stage, std::vector<double>(poset.downset(stage).size(), c));
}

double DownsetFn::at(std::size_t v) const {
  for (std::size_t i = 0; i < domain_.size(); ++i)
    if (domain_[i] == v) return values_[i];
  throw Error(ErrorCode::ContextNotInPoset, "context " + std::to_string(v) + " is not below the stage");
}

DownsetFn DownsetFn::restrict(const ContextPoset& poset, std::size_t sub) const {
  if (!poset.leq(sub, stage_)) throw Error(ErrorCode::NotASubcontext, "restriction target");
  std::vector<double> out;
  for (std::size_t w : poset.downset(sub)) out.push_back(at(w));
  return DownsetFn(poset, sub, std::move(out));
}

bool DownsetFn::is_order_reversing(const ContextPoset& poset, double eps) const {
  for (std::size_t i = 0; i < domain_.size(); ++i)
    for (std::size_t j = 0; j < domain_.size(); ++j)
      if (poset.leq(domain_[i], domain_[j]) && values_[i] < values_[j] - eps) return false;
  return true;
}

bool DownsetFn::is_order_preserving(const ContextPoset& poset, double eps) const {
  for (std::size_t i = 0; i < domain_.size(); ++i)
    for (std::size_t j = 0; j < domain_.size(); ++j)
      if (poset.leq(domain_[i], domain_[j]) && values_[i] > values_[j] + eps) return false;
  return true;
}

bool DownsetFn::approx_equal(const DownsetFn& other, double eps) const {
  if (stage_ != other.stage_ || domain_ != other.domain_) return false;
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (std::abs(values_[i] - other.values_[i]) > eps) return false;
  return true;
}

void DownsetFn::require_same_stage(const DownsetFn& o) const {
  if (stage_ != o.stage_ || domain_ != o.domain_) throw Error(ErrorCode::StageMismatch, "functions on different downsets");
}

DownsetFn DownsetFn::operator+(const DownsetFn& o) const {
  require_same_stage(o);
  DownsetFn out = *this;
  for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] += o.values_[i];
  return out;
}

DownsetFn DownsetFn::operator-(const DownsetFn& o) const {
  require_same_stage(o);
  DownsetFn out = *this;
  for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] -= o.values_[i];
  return out;
}

DownsetFn DownsetFn::scaled(double r) const {
  return map([r](double x) { return r * x + 0.0; });
}

template <Monotone M>
MonotoneFn<M>::MonotoneFn(const ContextPoset& poset, DownsetFn f, double eps) : f_(std::move(f)) {
  const bool ok = M == Monotone::Reversing ? f_.is_order_reversing(poset, eps) : f_.is_order_preserving(poset, eps);
  if (!ok)
    throw Error(ErrorCode::InvalidArgument,
                M == Monotone::Reversing ? "function is not order-reversing" : "function is not order-preserving");
}

template class MonotoneFn<Monotone::Reversing>;
template class MonotoneFn<Monotone::Preserving>;

RPair::RPair(const ContextPoset&, OrderPreservingFn m, OrderReversingFn n, double eps)
    : mu(std::move(m)), nu(std::move(n)) {
  if (mu.fn().domain() != nu.fn().domain() || mu.stage() != nu.stage())
    throw Error(ErrorCode::StageMismatch, "pair components on different stages");
  for (std::size_t i = 0; i < mu.fn().values().size(); ++i)
    if (mu.fn().values()[i] > nu.fn().values()[i] + eps)
      throw Error(ErrorCode::InvalidArgument, "pair requires mu <= nu");
}

KPair::KPair(OrderReversingFn n, OrderReversingFn k) : nu(std::move(n)), kappa(std::move(k)) {
  if (nu.stage() != kappa.stage() || nu.fn().domain() != kappa.fn().domain())
    throw Error(ErrorCode::StageMismatch, "class components on different stages");
}

namespace {

void require_same_stage(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorCode::StageMismatch, "stages " + std::to_string(a) + " and " + std::to_string(b));
}

}  // namespace

KPair k_embed(const ContextPoset& poset, const OrderReversingFn& nu) {
  return KPair(nu, OrderReversingFn(poset, DownsetFn::constant(poset, nu.stage(), 0.0)));
}

KPair k_add(const ContextPoset& poset, const KPair& x, const KPair& y) {
  require_same_stage(x.stage(), y.stage());
  return KPair(OrderReversingFn(poset, x.nu.fn() + y.nu.fn()),
               OrderReversingFn(poset, x.kappa.fn() + y.kappa.fn()));
}

KPair k_neg(const KPair& x) { return KPair(x.kappa, x.nu); }

bool k_eq(const KPair& x, const KPair& y, double eps) {
  require_same_stage(x.stage(), y.stage());
  return (x.nu.fn() + y.kappa.fn()).approx_equal(x.kappa.fn() + y.nu.fn(), eps);
}

KPair k_square(const ContextPoset& poset, const KPair& x, double eps) {
  for (double k : x.kappa.fn().values())
    if (std::abs(k) > eps) throw Error(ErrorCode::NotOuterForm, "square is defined only for classes [nu, 0]");
  const DownsetFn pos = x.nu.fn().map([](double v) { return v > 0 ? v * v : 0.0; });
  const DownsetFn neg = x.nu.fn().map([](double v) { return v < 0 ? -(v * v) : 0.0; });
  return KPair(OrderReversingFn(poset, pos), OrderReversingFn(poset, neg));
}

KPair k_multiply(const KPair&, const KPair&) {
  throw Error(ErrorCode::UndefinedOperation, "product of general k-extension classes");
}

RPair r_multiply(const RPair&, const RPair&) {
  throw Error(ErrorCode::UndefinedOperation, "product on the pair presheaf");
}

KPair scalar_mult(const ContextPoset& poset, double r, const KPair& x) {
  if (r >= 0)
    return KPair(OrderReversingFn(poset, x.nu.fn().scaled(r)), OrderReversingFn(poset, x.kappa.fn().scaled(r)));
  return KPair(OrderReversingFn(poset, x.kappa.fn().scaled(-r)), OrderReversingFn(poset, x.nu.fn().scaled(-r)));
}

RPair scalar_mult(const ContextPoset& poset, double r, const RPair& x) {
  if (r >= 0)
    return RPair(poset, OrderPreservingFn(poset, x.mu.fn().scaled(r)), OrderReversingFn(poset, x.nu.fn().scaled(r)));
  return RPair(poset, OrderPreservingFn(poset, x.nu.fn().scaled(r)), OrderReversingFn(poset, x.mu.fn().scaled(r)));
}

RPair r_add(const ContextPoset& poset, const RPair& x, const RPair& y) {
  require_same_stage(x.stage(), y.stage());
  return RPair(poset, OrderPreservingFn(poset, x.mu.fn() + y.mu.fn()), OrderReversingFn(poset, x.nu.fn() + y.nu.fn()));
}

RPair pseudo_subtract(const ContextPoset& poset, const RPair& x, const RPair& y) {
  require_same_stage(x.stage(), y.stage());
  return RPair(poset, OrderPreservingFn(poset, x.mu.fn() - y.nu.fn()), OrderReversingFn(poset, x.nu.fn() - y.mu.fn()));
}

KPair pr_quotient(const ContextPoset& poset, const RPair& x) {
  return KPair(x.nu, OrderReversingFn(poset, -x.mu.fn()));
}

bool r_equiv(const RPair& x, const RPair& y, double eps) {
  require_same_stage(x.stage(), y.stage());
  return (x.mu.fn() + x.nu.fn()).approx_equal(y.mu.fn() + y.nu.fn(), eps);
}

BvDecomposition bv_decompose(const ContextPoset& poset, const DownsetFn& f) {
  const auto& dom = f.domain();
  std::vector<double> var(dom.size(), 0.0);
  // The downset is ordered by descending block count, so proper subcontexts
  // come later; walk it backwards.
  for (std::size_t i = dom.size(); i-- > 0;) {
    double best = 0.0;
    for (std::size_t j = i + 1; j < dom.size(); ++j)
      if (poset.leq(dom[j], dom[i]) && dom[j] != dom[i])
        best = std::max(best, var[j] + std::abs(f.values()[i] - f.values()[j]));
    var[i] = best;
  }
  DownsetFn variation(poset, f.stage(), var);
  const double eps = 1e-9 * (1.0 + *std::max_element(var.begin(), var.end()));
  return BvDecomposition{OrderReversingFn(poset, f - variation, eps), OrderReversingFn(poset, -variation, eps),
                         variation};
}

RPair QuantityArrow::pair(std::size_t v, std::size_t block) const {
  if (!has_inner()) throw Error(ErrorCode::InvalidArgument, "arrow was built in outer-only mode");
  return RPair(*poset, inner.at(v).at(block), outer.at(v).at(block), poset->tolerance().eps_eig);
}

namespace {

QuantityArrow build_arrow(const HermitianOperator& a, PosetPtr poset, bool with_inner, const TolerancePolicy& tol) {
  if (a.dim() != poset->dim()) throw Error(ErrorCode::DimensionMismatch, "operator vs poset");
  const std::size_t n = poset->size();
  std::vector<HermitianOperator> outer_table(n), inner_table(n);
  for (std::size_t v = 0; v < n; ++v) {
    outer_table[v] = outer_das_sa(a, poset->at(v), tol);
    if (with_inner) inner_table[v] = inner_das_sa(a, poset->at(v), tol);
  }
  QuantityArrow q{poset, a, {}, {}};
  q.outer.resize(n);
  if (with_inner) q.inner.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& down = poset->downset(v);
    for (std::size_t b = 0; b < poset->at(v).size(); ++b) {
      std::vector<double> ov, iv;
      for (std::size_t w : down) {
        const std::size_t rb = poset->parents(w, v)[b];
        ov.push_back(evaluate(poset->at(w), rb, outer_table[w].matrix(), tol));
        if (with_inner) iv.push_back(evaluate(poset->at(w), rb, inner_table[w].matrix(), tol));
      }
      q.outer[v].emplace_back(*poset, DownsetFn(*poset, v, ov), tol.eps_eig);
      if (with_inner) q.inner[v].emplace_back(*poset, DownsetFn(*poset, v, iv), tol.eps_eig);
    }
  }
  return q;
}

}  // namespace

QuantityArrow breve_outer(const HermitianOperator& a, PosetPtr poset, const TolerancePolicy& tol) {
  return build_arrow(a, std::move(poset), false, tol);
}

QuantityArrow breve_pair(const HermitianOperator& a, PosetPtr poset, const TolerancePolicy& tol) {
  return build_arrow(a, std::move(poset), true, tol);
}

std::optional<std::string> validate_naturality(const QuantityArrow& q, double eps) {
  const ContextPoset& poset = *q.poset;
  for (std::size_t v = 0; v < poset.size(); ++v)
    for (std::size_t sub : poset.downset(v))
      for (std::size_t b = 0; b < poset.at(v).size(); ++b) {
        const std::size_t rb = poset.parents(sub, v)[b];
        const std::string where = poset.at(v).id() + " -> " + poset.at(sub).id() + " block " + std::to_string(b);
        if (!q.outer[v][b].fn().restrict(poset, sub).approx_equal(q.outer[sub][rb].fn(), eps))
          return "outer component not natural at " + where;
        if (q.has_inner() && !q.inner[v][b].fn().restrict(poset, sub).approx_equal(q.inner[sub][rb].fn(), eps))
          return "inner component not natural at " + where;
      }
  return std::nullopt;
}

bool arrows_equal(const QuantityArrow& a, const QuantityArrow& b, double eps) {
  if (a.poset != b.poset || a.has_inner() != b.has_inner()) return false;
  for (std::size_t v = 0; v < a.outer.size(); ++v)
    for (std::size_t k = 0; k < a.outer[v].size(); ++k) {
      if (!a.outer[v][k].fn().approx_equal(b.outer[v][k].fn(), eps)) return false;
      if (a.has_inner() && !a.inner[v][k].fn().approx_equal(b.inner[v][k].fn(), eps)) return false;
    }
  return true;
}

std::vector<std::vector<KPair>> intrinsic_dispersion(const HermitianOperator& a, PosetPtr poset,
                                                     const TolerancePolicy& tol) {
  const HermitianOperator a2(a.matrix() * a.matrix(), tol);
  const QuantityArrow qa = breve_outer(a, poset, tol);
  const QuantityArrow qa2 = breve_outer(a2, poset, tol);
  std::vector<std::vector<KPair>> out(poset->size());
  for (std::size_t v = 0; v < poset->size(); ++v)
    for (std::size_t b = 0; b < poset->at(v).size(); ++b) {
      const KPair sq = k_square(*poset, k_embed(*poset, qa.outer[v][b]));
      out[v].push_back(k_add(*poset, k_embed(*poset, qa2.outer[v][b]), k_neg(sq)));
    }
  return out;
}

ValueInState value_in_state(const QuantityArrow& q, const Subobject& w) {
  if (&w.parent().poset() != q.poset.get()) throw Error(ErrorCode::ParentMismatch, "subobject over another poset");
  ValueInState s;
  s.blocks.resize(q.poset->size());
  s.values.resize(q.poset->size());
  for (std::size_t v = 0; v < q.poset->size(); ++v)
    for (std::size_t b : w.fibre(v)) {
      s.blocks[v].push_back(b);
      s.values[v].push_back(q.pair(v, b));
    }
  return s;
}

namespace {

bool pair_equal(const RPair& a, const RPair& b, double eps) {
  return a.mu.fn().approx_equal(b.mu.fn(), eps) && a.nu.fn().approx_equal(b.nu.fn(), eps);
}

bool contains_pair(const std::vector<RPair>& set, const RPair& p, double eps) {
  return std::any_of(set.begin(), set.end(), [&](const RPair& x) { return pair_equal(x, p, eps); });
}

}  // namespace

std::optional<std::string> validate_value_in_state(const QuantityArrow& q, const ValueInState& s, double eps) {
  const ContextPoset& poset = *q.poset;
  for (std::size_t v = 0; v < poset.size(); ++v)
    for (std::size_t sub : poset.downset(v)) {
      std::vector<RPair> image;
      for (const RPair& p : s.values[v]) {
        RPair r(poset, OrderPreservingFn(poset, p.mu.fn().restrict(poset, sub), eps),
                OrderReversingFn(poset, p.nu.fn().restrict(poset, sub), eps), eps);
        if (!contains_pair(s.values[sub], r, eps))
          return "restriction " + poset.at(v).id() + " -> " + poset.at(sub).id() + " leaves the image";
        image.push_back(std::move(r));
      }
      for (const RPair& p : s.values[sub])
        if (!contains_pair(image, p, eps))
          return "image at " + poset.at(sub).id() + " is not reached from " + poset.at(v).id();
    }
  return std::nullopt;
}

std::vector<std::vector<char>> inverse_image(const QuantityArrow& q, const ValueInState& s, double eps) {
  std::vector<std::vector<char>> out(q.poset->size());
  for (std::size_t v = 0; v < q.poset->size(); ++v)
    for (std::size_t b = 0; b < q.poset->at(v).size(); ++b)
      out[v].push_back(contains_pair(s.values[v], q.pair(v, b), eps));
  return out;
}

}  // namespace tqt
