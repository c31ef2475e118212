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

#include "tqt/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace tqt {

UnitaryOperator::UnitaryOperator(const Matrix& m, const TolerancePolicy& tol) : m_(m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "unitary must be square");
  const double d = max_abs_diff(m * m.adjoint(), Matrix::Identity(m.rows(), m.cols()));
  if (d > tol.eps_matrix) throw Error(ErrorCode::NonUnitaryInput, "U U^dagger deviates from 1 by " + std::to_string(d));
}

UnitaryOperator UnitaryOperator::identity(int dim) { return UnitaryOperator(Matrix::Identity(dim, dim)); }

UnitaryOperator UnitaryOperator::adjoint() const {
  UnitaryOperator out;
  out.m_ = m_.adjoint();
  return out;
}

UnitaryOperator UnitaryOperator::operator*(const UnitaryOperator& o) const {
  if (o.dim() != dim()) throw Error(ErrorCode::DimensionMismatch, "unitary product");
  UnitaryOperator out;
  out.m_ = m_ * o.m_;
  return out;
}

Projection UnitaryOperator::conjugate(const Projection& p) const {
  if (p.dim() != dim()) throw Error(ErrorCode::DimensionMismatch, "unitary vs projection");
  return Projection(conjugate(p.matrix()));
}

HermitianOperator phase_operator(const UnitaryOperator& u, const TolerancePolicy& tol) {
  const int n = u.dim();
  Eigen::ComplexEigenSolver<Matrix> es(u.matrix());
  std::vector<double> phases;
  for (int i = 0; i < n; ++i) {
    double t = std::arg(es.eigenvalues()[i]);
    if (t <= -std::numbers::pi + tol.eps_eig) t = std::numbers::pi;
    phases.push_back(t);
  }
  std::sort(phases.begin(), phases.end());
  Matrix theta = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < phases.size();) {
    std::size_t end = k;
    double sum = phases[k];
    while (end + 1 < phases.size() && phases[end + 1] - phases[end] <= tol.eps_eig) sum += phases[++end];
    const std::size_t mult = end - k + 1;
    const double t = sum / static_cast<double>(mult);
    const Matrix shifted = u.matrix() - std::polar(1.0, t) * Matrix::Identity(n, n);
    Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullV);
    const Matrix basis = svd.matrixV().rightCols(static_cast<Eigen::Index>(mult));
    theta += t * basis * basis.adjoint();
    k = end + 1;
  }
  return HermitianOperator(theta, TolerancePolicy{1e-7, tol.eps_eig, tol.eps_prob});
}

Matrix exp_i(const HermitianOperator& a, const TolerancePolicy& tol) {
  const auto dec = spectral_decompose(a, tol);
  Matrix out = Matrix::Zero(a.dim(), a.dim());
  for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k)
    out += std::polar(1.0, dec.eigenvalues[k]) * dec.eigenprojections[k].matrix();
  return out;
}

Context ell_U(const UnitaryOperator& u, const Context& v, const TolerancePolicy& tol) {
  if (u.dim() != v.dim()) throw Error(ErrorCode::DimensionMismatch, "unitary vs context");
  std::vector<Projection> blocks;
  for (const auto& q : v.blocks()) blocks.push_back(u.conjugate(q));
  return Context::from_blocks(std::move(blocks), tol, v.is_trivial());
}

CheckRecord covariance_check(const Projection& p, const UnitaryOperator& u, const Context& v,
                             const TolerancePolicy& tol) {
  const Matrix lhs = u.conjugate(outer_das_proj(p, v, tol).matrix());
  const Matrix rhs = outer_das_proj(u.conjugate(p), ell_U(u, v, tol), tol).matrix();
  CheckRecord r;
  r.discrepancy = max_abs_diff(lhs, rhs);
  r.ok = r.discrepancy < tol.eps_matrix;
  if (!r.ok) r.detail = "conjugated daseinisation differs at " + v.id();
  return r;
}

MonotoneMap make_monotone_map(PosetPtr source, PosetPtr target, std::vector<std::size_t> map) {
  if (map.size() != source->size()) throw Error(ErrorCode::NonMonotoneMap, "map must cover the source poset");
  for (std::size_t t : map)
    if (t >= target->size()) throw Error(ErrorCode::NonMonotoneMap, "image outside the target poset");
  for (std::size_t a = 0; a < source->size(); ++a)
    for (std::size_t b = 0; b < source->size(); ++b)
      if (source->leq(a, b) && !target->leq(map[a], map[b]))
        throw Error(ErrorCode::NonMonotoneMap, source->at(a).id() + " <= " + source->at(b).id() + " is not preserved");
  return MonotoneMap{std::move(source), std::move(target), std::move(map)};
}

namespace {

std::size_t image_index(const UnitaryOperator& u, const ContextPoset& poset, std::size_t v, const TolerancePolicy& tol) {
  const auto idx = poset.find(ell_U(u, poset.at(v), tol));
  if (!idx) throw Error(ErrorCode::PosetNotClosedUnderU, "image of " + poset.at(v).id() + " is not in the poset");
  return *idx;
}

}  // namespace

MonotoneMap ell_U_map(const UnitaryOperator& u, PosetPtr poset, const TolerancePolicy& tol) {
  std::vector<std::size_t> map;
  for (std::size_t v = 0; v < poset->size(); ++v) map.push_back(image_index(u, *poset, v, tol));
  return make_monotone_map(poset, poset, std::move(map));
}

FinitePresheaf inverse_image(const MonotoneMap& m, const FinitePresheaf& p) {
  if (&p.poset() != m.target.get()) throw Error(ErrorCode::ParentMismatch, "presheaf is not over the target poset");
  const ContextPoset& src = *m.source;
  std::vector<std::size_t> sizes;
  for (std::size_t v = 0; v < src.size(); ++v) sizes.push_back(p.fibre_size(m.map[v]));
  FinitePresheaf out(m.source, sizes);
  for (std::size_t v = 0; v < src.size(); ++v) {
    std::vector<std::string> labels;
    for (std::size_t x = 0; x < sizes[v]; ++x) labels.push_back(p.label(m.map[v], x));
    out.set_labels(v, std::move(labels));
    for (std::size_t sub : src.downset(v)) {
      if (sub == v) continue;
      std::vector<std::size_t> map(sizes[v]);
      for (std::size_t x = 0; x < sizes[v]; ++x) map[x] = p.restrict(m.map[v], m.map[sub], x);
      out.set_restriction(v, sub, std::move(map));
    }
  }
  if (auto bad = validate(out)) throw Error(ErrorCode::InvalidArgument, "pulled-back presheaf: " + bad->message);
  return out;
}

CheckRecord truth_covariance_check(const Projection& p, const UnitaryOperator& u, const StateVector& psi,
                                   std::size_t v, const ContextPoset& poset, const TolerancePolicy& tol) {
  if (v >= poset.size()) throw Error(ErrorCode::ContextNotInPoset, std::to_string(v));
  std::vector<std::size_t> image(poset.size(), 0);
  for (std::size_t w : poset.downset(v)) image[w] = image_index(u, poset, w, tol);
  const Sieve before = truth_value(p, psi, v, poset, tol);
  const Sieve after = truth_value(u.conjugate(p), StateVector::normalized(u.apply(psi.amplitudes())), image[v],
                                  poset, tol);
  std::vector<std::size_t> mapped;
  for (std::size_t w : before.members) mapped.push_back(image[w]);
  std::sort(mapped.begin(), mapped.end());
  CheckRecord r;
  r.ok = mapped == after.members;
  r.discrepancy = r.ok ? 0.0 : 1.0;
  if (!r.ok) r.detail = "transported sieve differs at " + poset.at(image[v]).id();
  return r;
}

UnitaryOperator das_unitary(const UnitaryOperator& u, const Context& v, const TolerancePolicy& tol) {
  if (u.dim() != v.dim()) throw Error(ErrorCode::DimensionMismatch, "unitary vs context");
  return UnitaryOperator(exp_i(outer_das_sa(phase_operator(u, tol), v, tol), tol), TolerancePolicy{1e-7, 1e-7, 1e-7});
}

Context direct_sum_context(const Context& v1, const Context& v2, const TolerancePolicy& tol) {
  std::vector<Projection> blocks;
  const Matrix z1 = Matrix::Zero(v1.dim(), v1.dim());
  const Matrix z2 = Matrix::Zero(v2.dim(), v2.dim());
  for (const auto& q : v1.blocks()) blocks.emplace_back(direct_sum(q.matrix(), z2), tol);
  for (const auto& r : v2.blocks()) blocks.emplace_back(direct_sum(z1, r.matrix()), tol);
  return Context::from_blocks(std::move(blocks), tol);
}

Context tensor_context(const Context& v1, const Context& v2, const TolerancePolicy& tol) {
  std::vector<Projection> blocks;
  for (const auto& q : v1.blocks())
    for (const auto& r : v2.blocks()) blocks.emplace_back(kron(q.matrix(), r.matrix()), tol);
  return Context::from_blocks(std::move(blocks), tol, v1.is_trivial() && v2.is_trivial());
}

namespace {

TranslationRecord compare(Matrix direct, Matrix translated, double eps) {
  TranslationRecord r;
  r.discrepancy = max_abs_diff(direct, translated);
  r.equal = r.discrepancy <= eps;
  r.direct = std::move(direct);
  r.translated = std::move(translated);
  return r;
}

double max_eigenvalue(const HermitianOperator& a, const TolerancePolicy& tol) {
  return spectral_decompose(a, tol).eigenvalues.back();
}

HermitianOperator das_sa(const HermitianOperator& a, const Context& v, DasMode mode, const TolerancePolicy& tol) {
  return mode == DasMode::Outer ? outer_das_sa(a, v, tol) : inner_das_sa(a, v, tol);
}

}  // namespace

TranslationRecord direct_sum_translate(const HermitianOperator& a1, const HermitianOperator& a2, const Context& v,
                                       const TolerancePolicy& tol) {
  if (a1.dim() != v.dim()) throw Error(ErrorCode::DimensionMismatch, "first factor vs context");
  const HermitianOperator sum(direct_sum(a1.matrix(), a2.matrix()));
  const Context mv = direct_sum_context(v, Context::trivial(a2.dim()), tol);
  const Matrix top = max_eigenvalue(a2, tol) * Matrix::Identity(a2.dim(), a2.dim());
  return compare(outer_das_sa(sum, mv, tol).matrix(), direct_sum(outer_das_sa(a1, v, tol).matrix(), top),
                 tol.eps_matrix);
}

TranslationRecord direct_sum_lemma(const HermitianOperator& a1, const HermitianOperator& a2, const Context& v1,
                                   const Context& v2, DasMode mode, const TolerancePolicy& tol) {
  if (a1.dim() != v1.dim() || a2.dim() != v2.dim()) throw Error(ErrorCode::DimensionMismatch, "factor vs context");
  const HermitianOperator sum(direct_sum(a1.matrix(), a2.matrix()));
  const Context v = direct_sum_context(v1, v2, tol);
  return compare(das_sa(sum, v, mode, tol).matrix(),
                 direct_sum(das_sa(a1, v1, mode, tol).matrix(), das_sa(a2, v2, mode, tol).matrix()), tol.eps_matrix);
}

namespace {

// Orthogonal projection of X onto span{Q_i} in the Hilbert-Schmidt inner
// product.
Matrix project_onto(const Context& w, const Matrix& x) {
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const auto& q : w.blocks()) out += ((q.matrix() * x).trace() / static_cast<double>(q.rank())) * q.matrix();
  return out;
}

}  // namespace

Context tensor_floor(const Context& w, int d1, int d2, const TolerancePolicy& tol) {
  if (d1 <= 0 || d2 <= 0 || w.dim() != d1 * d2) throw Error(ErrorCode::DimensionMismatch, "composite context");
  const Matrix id2 = Matrix::Identity(d2, d2);
  const int dd = w.dim() * w.dim();
  Matrix map(dd, d1 * d1);
  for (int j = 0; j < d1; ++j)
    for (int k = 0; k < d1; ++k) {
      Matrix e = Matrix::Zero(d1, d1);
      e(j, k) = 1.0;
      const Matrix x = kron(e, id2);
      const Matrix y = x - project_onto(w, x);
      map.col(j * d1 + k) = Eigen::Map<const Vector>(y.data(), dd);
    }
  Eigen::JacobiSVD<Matrix> svd(map, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thr = tol.eps_eig * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > thr) ++rank;
  std::vector<Matrix> kernel;
  for (Eigen::Index c = rank; c < svd.matrixV().cols(); ++c) {
    Matrix k(d1, d1);
    for (int j = 0; j < d1; ++j)
      for (int l = 0; l < d1; ++l) k(j, l) = svd.matrixV()(j * d1 + l, c);
    kernel.push_back(std::move(k));
  }
  if (kernel.size() <= 1) return Context::trivial(d1);

  // A generic Hermitian element of the (commutative) kernel algebra has the
  // atoms of the algebra as its eigenprojections.
  std::mt19937_64 rng(0x7471745f666c6f72ULL);
  std::normal_distribution<double> normal;
  for (int attempt = 0; attempt < 16; ++attempt) {
    Matrix x = Matrix::Zero(d1, d1);
    for (const auto& k : kernel) x += Complex(normal(rng), normal(rng)) * k;
    const HermitianOperator h(0.5 * (x + x.adjoint()), TolerancePolicy{1e-6, tol.eps_eig, tol.eps_prob});
    const auto dec = spectral_decompose(h, tol);
    if (dec.eigenprojections.size() != kernel.size()) continue;
    bool ok = true;
    for (const auto& p : dec.eigenprojections) {
      const Matrix e = kron(p.matrix(), id2);
      if (max_abs_diff(e, project_onto(w, e)) > tol.eps_matrix) ok = false;
    }
    if (ok) return Context::from_blocks(dec.eigenprojections, tol, dec.eigenprojections.size() == 1);
  }
  throw Error(ErrorCode::InvalidArgument, "could not resolve the floor algebra of " + w.id());
}

HermitianOperator tensor_translate(const HermitianOperator& a1, const Context& w, int d2, const TolerancePolicy& tol) {
  const Context floor = tensor_floor(w, a1.dim(), d2, tol);
  return HermitianOperator(kron(outer_das_sa(a1, floor, tol).matrix(), Matrix::Identity(d2, d2)));
}

GapSearch translation_gap_witness(const HermitianOperator& a1, const ContextPoset& composite, int d2,
                                  const TolerancePolicy& tol) {
  const HermitianOperator lifted(kron(a1.matrix(), Matrix::Identity(d2, d2)));
  GapSearch out;
  for (std::size_t v = 0; v < composite.size(); ++v) {
    const Context& w = composite.at(v);
    GapRecord r{v, tensor_floor(w, a1.dim(), d2, tol), {}};
    const Matrix translated = kron(outer_das_sa(a1, r.floor, tol).matrix(), Matrix::Identity(d2, d2));
    r.comparison = compare(outer_das_sa(lifted, w, tol).matrix(), translated, tol.eps_eig);
    if (!r.comparison.equal && !out.witness) out.witness = out.records.size();
    out.records.push_back(std::move(r));
  }
  return out;
}

}  // namespace tqt
