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

// Quantity-value presheaves over a finite context poset. Real-valued
// functions on a downset are stored extensionally, one value per context
// below the stage.

#include <optional>
#include <string>
#include <vector>

#include "tqt/dasein.hpp"

namespace tqt {

/// A real function on the downset of `stage`, values aligned with
/// ContextPoset::downset(stage).
class DownsetFn {
 public:
  DownsetFn() = default;
  DownsetFn(const ContextPoset& poset, std::size_t stage, std::vector<double> values);
  static DownsetFn constant(const ContextPoset& poset, std::size_t stage, double c);

  std::size_t stage() const { return stage_; }
  const std::vector<std::size_t>& domain() const { return domain_; }
  const std::vector<double>& values() const { return values_; }
  /// Throws ContextNotInPoset when v is outside the domain.
  double at(std::size_t v) const;

  /// The restriction to the downset of sub. Throws NotASubcontext.
  DownsetFn restrict(const ContextPoset& poset, std::size_t sub) const;

  bool is_order_reversing(const ContextPoset& poset, double eps) const;
  bool is_order_preserving(const ContextPoset& poset, double eps) const;
  bool approx_equal(const DownsetFn& other, double eps) const;

  DownsetFn operator+(const DownsetFn& o) const;
  DownsetFn operator-(const DownsetFn& o) const;
  DownsetFn operator-() const { return scaled(-1.0); }
  DownsetFn scaled(double r) const;
  template <typename F>
  DownsetFn map(F&& f) const {
    DownsetFn out = *this;
    for (double& x : out.values_) x = f(x);
    return out;
  }

 private:
  void require_same_stage(const DownsetFn& o) const;

  std::size_t stage_ = 0;
  std::vector<std::size_t> domain_;
  std::vector<double> values_;
};

enum class Monotone { Reversing, Preserving };

/// A DownsetFn checked to be order-reversing (V2 <= V1 implies f(V2) >=
/// f(V1)) or order-preserving. Throws InvalidArgument otherwise.
template <Monotone M>
class MonotoneFn {
 public:
  MonotoneFn() = default;
  MonotoneFn(const ContextPoset& poset, DownsetFn f, double eps = 1e-9);

  const DownsetFn& fn() const { return f_; }
  std::size_t stage() const { return f_.stage(); }
  double at(std::size_t v) const { return f_.at(v); }

 private:
  DownsetFn f_;
};

using OrderReversingFn = MonotoneFn<Monotone::Reversing>;
using OrderPreservingFn = MonotoneFn<Monotone::Preserving>;

/// (mu, nu) in R^<->: mu order-preserving, nu order-reversing, mu <= nu.
struct RPair {
  OrderPreservingFn mu;
  OrderReversingFn nu;

  RPair() = default;
  RPair(const ContextPoset& poset, OrderPreservingFn m, OrderReversingFn n, double eps = 1e-9);
  std::size_t stage() const { return mu.stage(); }
  DownsetFn width() const { return nu.fn() - mu.fn(); }
};

/// [nu, kappa] in k(R^>=), read as "nu - kappa".
struct KPair {
  OrderReversingFn nu;
  OrderReversingFn kappa;

  KPair() = default;
  KPair(OrderReversingFn n, OrderReversingFn k);
  std::size_t stage() const { return nu.stage(); }
  DownsetFn difference() const { return nu.fn() - kappa.fn(); }
};

/// The embedding nu -> [nu, 0].
KPair k_embed(const ContextPoset& poset, const OrderReversingFn& nu);
KPair k_add(const ContextPoset& poset, const KPair& x, const KPair& y);
KPair k_neg(const KPair& x);
/// [n1,k1] == [n2,k2] iff n1 + k2 == k1 + n2 pointwise.
bool k_eq(const KPair& x, const KPair& y, double eps = 1e-9);
/// [nu, 0]^2 = [nu_+^2, -nu_-^2]. Throws NotOuterForm unless kappa == 0.
KPair k_square(const ContextPoset& poset, const KPair& x, double eps = 1e-9);
/// Products of general classes are not defined; always throws
/// UndefinedOperation.
KPair k_multiply(const KPair& x, const KPair& y);
RPair r_multiply(const RPair& x, const RPair& y);

KPair scalar_mult(const ContextPoset& poset, double r, const KPair& x);
RPair scalar_mult(const ContextPoset& poset, double r, const RPair& x);
RPair r_add(const ContextPoset& poset, const RPair& x, const RPair& y);
/// (mu1, nu1) - (mu2, nu2) = (mu1 - nu2, nu1 - mu2).
RPair pseudo_subtract(const ContextPoset& poset, const RPair& x, const RPair& y);
/// (mu, nu) -> [nu, -mu].
KPair pr_quotient(const ContextPoset& poset, const RPair& x);
/// (mu1, nu1) ~ (mu2, nu2) iff mu1 + nu1 == mu2 + nu2.
bool r_equiv(const RPair& x, const RPair& y, double eps = 1e-9);

struct BvDecomposition {
  OrderReversingFn plus;   // f - I_f
  OrderReversingFn minus;  // -I_f
  DownsetFn variation;     // I_f
};

/// Writes f as a difference of two order-reversing functions, using the
/// maximal accumulated variation along chains from below.
BvDecomposition bv_decompose(const ContextPoset& poset, const DownsetFn& f);

/// The arrows Sigma -> R^>= (outer only) or Sigma -> R^<->.
struct QuantityArrow {
  PosetPtr poset;
  HermitianOperator op;
  std::vector<std::vector<OrderReversingFn>> outer;   // [context][block]
  std::vector<std::vector<OrderPreservingFn>> inner;  // empty in outer-only mode

  bool has_inner() const { return !inner.empty(); }
  /// Throws InvalidArgument in outer-only mode.
  RPair pair(std::size_t v, std::size_t block) const;
};

/// lambda -> (V' -> <lambda|V', delta^o(A)_V'>).
QuantityArrow breve_outer(const HermitianOperator& a, PosetPtr poset, const TolerancePolicy& tol = {});
/// lambda -> (inner function, outer function).
QuantityArrow breve_pair(const HermitianOperator& a, PosetPtr poset, const TolerancePolicy& tol = {});
/// Component at V followed by restriction to V' equals restriction of
/// lambda followed by the component at V'. Reports the first failure.
std::optional<std::string> validate_naturality(const QuantityArrow& q, double eps = 1e-9);
/// Componentwise equality of two arrows over the same poset.
bool arrows_equal(const QuantityArrow& a, const QuantityArrow& b, double eps = 1e-9);

/// [delta^o(A^2)] - [delta^o(A)]^2 per context and block.
std::vector<std::vector<KPair>> intrinsic_dispersion(const HermitianOperator& a, PosetPtr poset,
                                                     const TolerancePolicy& tol = {});

/// The image of a subobject of Sigma under the pair arrow.
struct ValueInState {
  std::vector<std::vector<std::size_t>> blocks;  // the selected elements per context
  std::vector<std::vector<RPair>> values;        // their images
};

/// Requires a pair arrow over the same poset as w.
ValueInState value_in_state(const QuantityArrow& q, const Subobject& w);
/// Checks that restricting the values at V to V' gives exactly the values
/// at V'.
std::optional<std::string> validate_value_in_state(const QuantityArrow& q, const ValueInState& s,
                                                   double eps = 1e-9);
/// Fibrewise inverse image {lambda : q(lambda) in s_V}.
std::vector<std::vector<char>> inverse_image(const QuantityArrow& q, const ValueInState& s,
                                             double eps = 1e-9);

}  // namespace tqt
