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

#include "tqt/opalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tqt {

void TolerancePolicy::validate() const {
  if (!(eps_matrix > 0.0) || !(eps_eig > 0.0) || !(eps_prob > 0.0))
    throw Error(ErrorCode::InvalidArgument, "tolerances must be strictly positive");
  if (eps_eig < eps_matrix)
    throw Error(ErrorCode::InvalidArgument, "eps_eig must be at least eps_matrix");
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::DimensionMismatch, "matrix shapes differ");
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

bool approx_equal(const Matrix& a, const Matrix& b, double eps) {
  return max_abs_diff(a, b) < eps;
}

// -- HermitianOperator -------------------------------------------------------

HermitianOperator::HermitianOperator(const Matrix& m, const TolerancePolicy& tol) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorCode::DimensionMismatch, "operator must be a non-empty square matrix");
  if (!m.allFinite()) throw Error(ErrorCode::NonHermitianInput, "matrix has non-finite entries");
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol.eps_matrix)
    throw Error(ErrorCode::NonHermitianInput,
                "matrix differs from its adjoint by " + std::to_string(asym));
  m_ = (m + m.adjoint()) / 2.0;
}

HermitianOperator HermitianOperator::identity(int dim) {
  return HermitianOperator(Matrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(int dim) {
  return HermitianOperator(Matrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double>& diag) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(diag.size()), static_cast<Eigen::Index>(diag.size()));
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return HermitianOperator(m);
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
  if (dim() != other.dim()) throw Error(ErrorCode::DimensionMismatch, "operator sum");
  return HermitianOperator(m_ + other.m_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& other) const {
  if (dim() != other.dim()) throw Error(ErrorCode::DimensionMismatch, "operator difference");
  return HermitianOperator(m_ - other.m_);
}

HermitianOperator HermitianOperator::scaled(double r) const { return HermitianOperator(r * m_); }

double HermitianOperator::expectation(const Vector& psi) const {
  if (psi.size() != m_.rows()) throw Error(ErrorCode::DimensionMismatch, "expectation value");
  return psi.dot(m_ * psi).real();
}

// -- Projection --------------------------------------------------------------

Projection::Projection(const Matrix& m, const TolerancePolicy& tol) : op_(m, tol) {
  const Matrix& p = op_.matrix();
  const double idem = (p * p - p).cwiseAbs().maxCoeff();
  if (idem > tol.eps_matrix)
    throw Error(ErrorCode::InvalidArgument,
                "operator is not idempotent (deviation " + std::to_string(idem) + ")");
  const double tr = p.trace().real();
  rank_ = static_cast<int>(std::lround(tr));
  if (std::abs(tr - rank_) > tol.eps_eig)
    throw Error(ErrorCode::InvalidArgument, "projection trace is not an integer");
}

Projection Projection::zero(int dim) { return Projection(Matrix::Zero(dim, dim)); }

Projection Projection::identity(int dim) { return Projection(Matrix::Identity(dim, dim)); }

Projection Projection::onto(const Vector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw Error(ErrorCode::InvalidArgument, "cannot project onto the zero vector");
  const Vector u = psi / n;
  return Projection(u * u.adjoint());
}

Projection Projection::complement() const {
  return Projection(Matrix::Identity(dim(), dim()) - matrix());
}

bool proj_leq(const Projection& p, const Projection& q, const TolerancePolicy& tol) {
  if (p.dim() != q.dim()) throw Error(ErrorCode::DimensionMismatch, "projection order");
  return max_abs_diff(q.matrix() * p.matrix(), p.matrix()) < tol.eps_matrix;
}

bool proj_equal(const Projection& p, const Projection& q, const TolerancePolicy& tol) {
  if (p.dim() != q.dim()) throw Error(ErrorCode::DimensionMismatch, "projection equality");
  return max_abs_diff(p.matrix(), q.matrix()) < tol.eps_matrix;
}

bool proj_orthogonal(const Projection& p, const Projection& q, const TolerancePolicy& tol) {
  if (p.dim() != q.dim()) throw Error(ErrorCode::DimensionMismatch, "projection orthogonality");
  return (p.matrix() * q.matrix()).cwiseAbs().maxCoeff() < tol.eps_matrix;
}

// -- Spectral decomposition ----------------------------------------------------

HermitianOperator SpectralDecomposition::reconstruct() const {
  if (eigenprojections.empty()) throw Error(ErrorCode::InvalidArgument, "empty decomposition");
  const int n = eigenprojections.front().dim();
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < eigenvalues.size(); ++i)
    out += eigenvalues[i] * eigenprojections[i].matrix();
  return HermitianOperator(out);
}

SpectralDecomposition spectral_decompose(const HermitianOperator& a, const TolerancePolicy& tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::NonHermitianInput, "eigendecomposition failed");
  const Eigen::VectorXd& evals = solver.eigenvalues();  // ascending
  const Matrix& evecs = solver.eigenvectors();

  SpectralDecomposition out;
  const Eigen::Index n = evals.size();
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (i < n && evals(i) - evals(i - 1) <= tol.eps_eig) continue;
    double mean = 0.0;
    Matrix proj = Matrix::Zero(n, n);
    for (Eigen::Index k = start; k < i; ++k) {
      mean += evals(k);
      proj += evecs.col(k) * evecs.col(k).adjoint();
    }
    out.eigenvalues.push_back(mean / static_cast<double>(i - start));
    out.eigenprojections.emplace_back(proj, tol);
    start = i;
  }
  return out;
}

// -- Spectral family -----------------------------------------------------------

SpectralFamily::SpectralFamily(std::vector<double> jumps, std::vector<Projection> cumulative,
                               const TolerancePolicy& tol)
    : jumps_(std::move(jumps)), cumulative_(std::move(cumulative)) {
  if (jumps_.empty() || jumps_.size() != cumulative_.size())
    throw Error(ErrorCode::InvalidArgument, "spectral family needs one projection per jump");
  dim_ = cumulative_.front().dim();
  for (std::size_t k = 1; k < jumps_.size(); ++k) {
    if (!(jumps_[k] > jumps_[k - 1]))
      throw Error(ErrorCode::InvalidArgument, "spectral family jumps must be strictly increasing");
    if (!proj_leq(cumulative_[k - 1], cumulative_[k], tol))
      throw Error(ErrorCode::InvalidArgument, "spectral family is not monotone");
  }
  if (cumulative_.back().rank() != dim_)
    throw Error(ErrorCode::InvalidArgument, "spectral family must end at the identity");
}

Projection SpectralFamily::at(double lambda) const {
  Projection out = Projection::zero(dim_);
  for (std::size_t k = 0; k < jumps_.size() && jumps_[k] <= lambda; ++k) out = cumulative_[k];
  return out;
}

HermitianOperator SpectralFamily::integrate() const {
  Matrix out = Matrix::Zero(dim_, dim_);
  Matrix prev = Matrix::Zero(dim_, dim_);
  for (std::size_t k = 0; k < jumps_.size(); ++k) {
    out += jumps_[k] * (cumulative_[k].matrix() - prev);
    prev = cumulative_[k].matrix();
  }
  return HermitianOperator(out);
}

SpectralFamily spectral_family(const HermitianOperator& a, const TolerancePolicy& tol) {
  auto dec = spectral_decompose(a, tol);
  std::vector<Projection> cumulative;
  Matrix running = Matrix::Zero(a.dim(), a.dim());
  for (const auto& p : dec.eigenprojections) {
    running += p.matrix();
    cumulative.emplace_back(running, tol);
  }
  return SpectralFamily(dec.eigenvalues, std::move(cumulative), tol);
}

bool spectral_order_leq(const HermitianOperator& a, const HermitianOperator& b,
                        const TolerancePolicy& tol) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "spectral order");
  const auto fa = spectral_family(a, tol);
  const auto fb = spectral_family(b, tol);
  std::vector<double> points = fa.jumps();
  points.insert(points.end(), fb.jumps().begin(), fb.jumps().end());
  std::sort(points.begin(), points.end());
  // Jumps of the two families that agree within eps_eig are the same jump;
  // evaluate both families just above the cluster.
  for (double lambda : points) {
    const double probe = lambda + tol.eps_eig;
    if (!proj_leq(fb.at(probe), fa.at(probe), tol)) return false;
  }
  return true;
}

Projection projection_meet_join(const Projection& p, const Projection& q, LatticeOp which,
                                const TolerancePolicy& tol) {
  if (p.dim() != q.dim()) throw Error(ErrorCode::DimensionMismatch, "projection meet/join");
  if (which == LatticeOp::Meet) {
    return projection_meet_join(p.complement(), q.complement(), LatticeOp::Join, tol).complement();
  }
  // range(P) + range(Q) = range(P + Q) for positive operators.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(p.matrix() + q.matrix());
  const auto& evals = solver.eigenvalues();
  const auto& evecs = solver.eigenvectors();
  Matrix out = Matrix::Zero(p.dim(), p.dim());
  for (Eigen::Index k = 0; k < evals.size(); ++k)
    if (evals(k) > tol.eps_eig) out += evecs.col(k) * evecs.col(k).adjoint();
  return Projection(out, tol);
}

Projection proposition_projector(const HermitianOperator& a, Interval delta,
                                 const TolerancePolicy& tol) {
  auto dec = spectral_decompose(a, tol);
  Matrix out = Matrix::Zero(a.dim(), a.dim());
  for (std::size_t i = 0; i < dec.eigenvalues.size(); ++i) {
    const double ev = dec.eigenvalues[i];
    if (ev >= delta.lo - tol.eps_eig && ev <= delta.hi + tol.eps_eig)
      out += dec.eigenprojections[i].matrix();
  }
  return Projection(out, tol);
}

// -- States ------------------------------------------------------------------

StateVector::StateVector(const Vector& amplitudes, const TolerancePolicy& tol) : v_(amplitudes) {
  if (v_.size() == 0) throw Error(ErrorCode::DimensionMismatch, "empty state vector");
  if (std::abs(v_.norm() - 1.0) > tol.eps_matrix)
    throw Error(ErrorCode::InvalidArgument, "state vector is not normalised");
}

StateVector StateVector::normalized(const Vector& amplitudes) {
  const double n = amplitudes.norm();
  if (n == 0.0) throw Error(ErrorCode::InvalidArgument, "zero state vector");
  return StateVector(amplitudes / n);
}

DensityMatrix::DensityMatrix(const HermitianOperator& op, const TolerancePolicy& tol) : op_(op) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix(), Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol.eps_eig)
    throw Error(ErrorCode::InvalidArgument, "density matrix is not positive semidefinite");
  if (std::abs(op.matrix().trace().real() - 1.0) > tol.eps_eig)
    throw Error(ErrorCode::InvalidArgument, "density matrix trace differs from one");
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(HermitianOperator(Matrix::Identity(dim, dim) / static_cast<double>(dim)));
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace tqt
