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

// Shared test helpers: seeded random instances and brute-force oracles that
// recompute library results by independent routes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "tqt/opalg.hpp"
#include "tqt/context.hpp"
#include "tqt/qvalue.hpp"

/// Checks that `expr` throws tqt::Error with the given code.
#define TQT_CHECK_CODE(expr, c)                 \
  do {                                          \
    bool thrown_ = false;                       \
    try {                                       \
      (void)(expr);                             \
    } catch (const ::tqt::Error& e_) {          \
      thrown_ = true;                           \
      CHECK(e_.code() == (c));                  \
    }                                           \
    CHECK(thrown_);                             \
  } while (0)

namespace tqt::test {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double normal() { return std::normal_distribution<double>()(gen_); }
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline Matrix random_unitary(Rng& rng, int n) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) q.col(i) *= std::polar(1.0, std::arg(r(i, i)));
  return q;
}

/// A basis that shares a random subset of columns with `base` and mixes the
/// rest, so that random instances are neither always aligned nor always
/// generic.
inline Matrix related_basis(Rng& rng, const Matrix& base) {
  const int n = static_cast<int>(base.cols());
  const int mode = rng.integer(0, 2);
  if (mode == 0) return base;
  if (mode == 2) return random_unitary(rng, n);
  std::vector<int> mixed;
  for (int i = 0; i < n; ++i)
    if (rng.integer(0, 1)) mixed.push_back(i);
  if (mixed.size() < 2) return base;
  const Matrix u = random_unitary(rng, static_cast<int>(mixed.size()));
  Matrix out = base;
  for (std::size_t a = 0; a < mixed.size(); ++a) {
    Vector col = Vector::Zero(n);
    for (std::size_t b = 0; b < mixed.size(); ++b) col += u(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) * base.col(mixed[b]);
    out.col(mixed[a]) = col;
  }
  return out;
}

inline Projection basis_projection(const Matrix& basis, const std::vector<int>& cols) {
  const int n = static_cast<int>(basis.rows());
  Matrix p = Matrix::Zero(n, n);
  for (int c : cols) p += basis.col(c) * basis.col(c).adjoint();
  return Projection(p);
}

/// Context from a basis and a block label per column.
inline Context context_from_labels(const Matrix& basis, const std::vector<int>& labels) {
  const int k = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<Projection> blocks;
  for (int b = 0; b < k; ++b) {
    std::vector<int> cols;
    for (int i = 0; i < static_cast<int>(labels.size()); ++i)
      if (labels[i] == b) cols.push_back(i);
    blocks.push_back(basis_projection(basis, cols));
  }
  return Context::from_blocks(std::move(blocks), {}, k == 1);
}

/// A random context with between 2 and max_blocks blocks.
inline Context random_context(Rng& rng, const Matrix& basis, int max_blocks) {
  const int n = static_cast<int>(basis.cols());
  const int k = rng.integer(2, std::min(n, max_blocks));
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i < k ? i : rng.integer(0, k - 1);
  std::shuffle(labels.begin(), labels.end(), rng.engine());
  return context_from_labels(basis, labels);
}

inline Projection random_projection(Rng& rng, const Matrix& basis) {
  const int n = static_cast<int>(basis.cols());
  std::vector<int> cols;
  for (int i = 0; i < n; ++i)
    if (rng.integer(0, 1)) cols.push_back(i);
  return basis_projection(basis, cols);
}

/// Eigenvalues from a small integer range so that degeneracies occur.
inline HermitianOperator random_hermitian(Rng& rng, const Matrix& basis) {
  const int n = static_cast<int>(basis.cols());
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) a += static_cast<double>(rng.integer(-3, 3)) * basis.col(i) * basis.col(i).adjoint();
  return HermitianOperator(0.5 * (a + a.adjoint()));
}

inline StateVector random_state(Rng& rng, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(rng.normal(), rng.normal());
  return StateVector::normalized(v);
}

inline Projection dproj(const std::vector<double>& d) {
  return Projection(HermitianOperator::diagonal(d).matrix());
}

/// Context of the standard basis grouped by block labels.
inline Context diag_context(const std::vector<int>& labels) {
  const int n = static_cast<int>(labels.size());
  return context_from_labels(Matrix::Identity(n, n), labels);
}

inline PosetPtr make_poset(std::vector<Context> cs, bool include_trivial = false) {
  return std::make_shared<const ContextPoset>(ContextPoset::from_contexts(std::move(cs), include_trivial));
}

/// The maximal diagonal context in dimension 3 plus its three coarsenings.
inline PosetPtr dim3_coarsening_poset() {
  std::vector<Context> cs{diag_context({0, 1, 2})};
  for (const auto& c : coarsenings(cs[0])) cs.push_back(c);
  return make_poset(cs);
}

inline Vector vec(std::initializer_list<Complex> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v(i++) = x;
  return v;
}

/// Order-reversing function on the downset of `stage`: each value is a sum
/// of nonnegative weights over the contexts above it, shifted by a constant.
inline DownsetFn random_reversing(Rng& rng, const ContextPoset& poset, std::size_t stage) {
  const auto& dom = poset.downset(stage);
  std::vector<double> w(dom.size());
  for (double& x : w) x = rng.integer(0, 1) ? rng.uniform(0, 2) : 0.0;
  const double shift = rng.uniform(-3, 1);
  std::vector<double> vals(dom.size(), shift);
  for (std::size_t i = 0; i < dom.size(); ++i)
    for (std::size_t j = 0; j < dom.size(); ++j)
      if (poset.leq(dom[i], dom[j])) vals[i] += w[j];
  return DownsetFn(poset, stage, vals);
}

inline DownsetFn random_fn(Rng& rng, const ContextPoset& poset, std::size_t stage) {
  std::vector<double> vals(poset.downset(stage).size());
  for (double& x : vals) x = rng.uniform(-3, 3);
  return DownsetFn(poset, stage, vals);
}

// ---------------------------------------------------------------------------
// Oracles

/// Least (outer) or greatest (inner) element of P(V) relative to P by
/// scanning all 2^n lattice elements and comparing with the projection
/// order directly.
inline Projection oracle_lattice_extremum(const Projection& p, const Context& v, bool outer) {
  std::vector<BlockMask> candidates;
  for (BlockMask m = 0; m <= v.full_mask(); ++m) {
    const Matrix e = v.lattice_element(m).matrix();
    const bool ok = outer ? (e * p.matrix() - p.matrix()).cwiseAbs().maxCoeff() < 1e-9
                          : (p.matrix() * e - e).cwiseAbs().maxCoeff() < 1e-9;
    if (ok) candidates.push_back(m);
  }
  for (BlockMask c : candidates) {
    const bool extremal = std::all_of(candidates.begin(), candidates.end(),
                                      [&](BlockMask o) { return outer ? (c & o) == c : (c & o) == o; });
    if (extremal) return v.lattice_element(c);
  }
  throw std::logic_error("no extremum");
}

/// E_lambda of a Hermitian matrix from a fresh eigendecomposition.
inline Matrix oracle_family_at(const Matrix& a, double lambda) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  Matrix e = Matrix::Zero(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    if (es.eigenvalues()(i) <= lambda + 1e-7) e += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return e;
}

/// A <=_s B by comparing spectral families at every eigenvalue of either.
inline bool oracle_spectral_leq(const Matrix& a, const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> ea(a), eb(b);
  std::vector<double> pts;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    pts.push_back(ea.eigenvalues()(i));
    pts.push_back(eb.eigenvalues()(i));
  }
  for (double l : pts) {
    const Matrix fa = oracle_family_at(a, l), fb = oracle_family_at(b, l);
    if ((fa * fb - fb).cwiseAbs().maxCoeff() > 1e-7) return false;  // need E^B <= E^A
  }
  return true;
}

/// Spectral-order extremum over the grid of operators in V whose block
/// values are eigenvalues of A: the minimum of those above A (outer) or the
/// maximum of those below A (inner).
inline std::optional<Matrix> oracle_grid_extremum(const HermitianOperator& a, const Context& v, bool outer) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
  std::vector<double> sp;
  for (Eigen::Index i = 0; i < a.matrix().rows(); ++i) {
    const double x = es.eigenvalues()(i);
    if (sp.empty() || x - sp.back() > 1e-7) sp.push_back(x);
  }
  const std::size_t k = v.size();
  std::vector<Matrix> cands;
  std::vector<std::size_t> digits(k, 0);
  while (true) {
    std::vector<double> vals;
    for (std::size_t d : digits) vals.push_back(sp[d]);
    const Matrix b = v.combine(vals);
    if (outer ? oracle_spectral_leq(a.matrix(), b) : oracle_spectral_leq(b, a.matrix())) cands.push_back(b);
    std::size_t i = 0;
    while (i < k && ++digits[i] == sp.size()) digits[i++] = 0;
    if (i == k) break;
  }
  for (const auto& c : cands) {
    const bool extremal = std::all_of(cands.begin(), cands.end(), [&](const Matrix& o) {
      return outer ? oracle_spectral_leq(c, o) : oracle_spectral_leq(o, c);
    });
    if (extremal) return c;
  }
  return std::nullopt;
}

/// Exhaustive search for a ray assignment with exactly one selected ray in
/// every basis.
inline bool oracle_colourable(std::size_t rays, const std::vector<std::vector<std::size_t>>& bases) {
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << rays); ++a) {
    bool ok = true;
    for (const auto& b : bases) {
      int count = 0;
      for (std::size_t r : b) count += static_cast<int>(a >> r & 1U);
      if (count != 1) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

/// All proper filters of the Boolean lattice on n atoms, as sorted member
/// lists, by testing every subset of the lattice.
inline std::vector<std::vector<BlockMask>> oracle_filters(std::size_t n) {
  const BlockMask full = (BlockMask{1} << n) - 1;
  const std::size_t elems = full + 1;
  std::vector<std::vector<BlockMask>> out;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << elems); ++s) {
    auto in = [&](BlockMask m) { return (s >> m & 1U) != 0; };
    if (in(0)) continue;
    bool ok = true;
    for (BlockMask a = 0; a <= full && ok; ++a)
      for (BlockMask b = 0; b <= full && ok; ++b) {
        if (in(a) && (a & b) == a && !in(b)) ok = false;
        if (in(a) && in(b) && !in(a & b)) ok = false;
      }
    if (!ok) continue;
    std::vector<BlockMask> members;
    for (BlockMask m = 0; m <= full; ++m)
      if (in(m)) members.push_back(m);
    out.push_back(members);
  }
  return out;
}

/// Sup over chains W0 < W1 < ... < Wk = V inside the downset of the
/// function's stage of the summed absolute increments, by explicit
/// enumeration of chains.
inline double oracle_chain_variation(const ContextPoset& poset, const std::vector<std::size_t>& dom,
                                     const std::vector<double>& f, std::size_t top) {
  std::function<double(std::size_t)> best = [&](std::size_t i) {
    double out = 0.0;
    for (std::size_t j = 0; j < dom.size(); ++j)
      if (j != i && poset.leq(dom[j], dom[i])) out = std::max(out, best(j) + std::abs(f[i] - f[j]));
    return out;
  };
  return best(top);
}

}  // namespace tqt::test
