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

// Finite-dimensional operator algebra: Hermitian operators, projections,
// spectral decompositions and spectral families, and the spectral order.
//
// All matrices are dense complex double precision; instances are tiny
// (dimension <= 8 in practice) so no attempt is made at sparsity.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "tqt/error.hpp"

namespace tqt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct TolerancePolicy {
  double eps_matrix = 1e-9;  // entrywise comparison
  double eps_eig = 1e-7;     // eigenvalue clustering
  double eps_prob = 1e-7;    // "probability equals one"

  /// Throws InvalidArgument unless all tolerances are positive and
  /// eps_eig >= eps_matrix.
  void validate() const;
};

/// Largest absolute entry of a - b.
double max_abs_diff(const Matrix& a, const Matrix& b);
bool approx_equal(const Matrix& a, const Matrix& b, double eps);

class HermitianOperator {
 public:
  HermitianOperator() = default;
  /// Checks A == A^dagger within tol.eps_matrix and stores the symmetrised
  /// matrix. Throws NonHermitianInput otherwise.
  explicit HermitianOperator(const Matrix& m, const TolerancePolicy& tol = {});

  static HermitianOperator identity(int dim);
  static HermitianOperator zero(int dim);
  static HermitianOperator diagonal(const std::vector<double>& diag);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

  HermitianOperator operator+(const HermitianOperator& other) const;
  HermitianOperator operator-(const HermitianOperator& other) const;
  HermitianOperator scaled(double r) const;
  /// Expectation value <psi|A|psi> (real part).
  double expectation(const Vector& psi) const;

 private:
  Matrix m_;
};

class Projection {
 public:
  Projection() = default;
  /// Validates idempotency; rank is the rounded trace.
  explicit Projection(const Matrix& m, const TolerancePolicy& tol = {});

  static Projection zero(int dim);
  static Projection identity(int dim);
  /// Rank-one projection |psi><psi| onto the (normalised) vector.
  static Projection onto(const Vector& psi);

  int dim() const { return op_.dim(); }
  int rank() const { return rank_; }
  const Matrix& matrix() const { return op_.matrix(); }
  const HermitianOperator& op() const { return op_; }
  bool is_zero() const { return rank_ == 0; }

  Projection complement() const;

 private:
  HermitianOperator op_;
  int rank_ = 0;
};

/// Projection order P <= Q, tested as ||QP - P||_max < eps_matrix.
bool proj_leq(const Projection& p, const Projection& q, const TolerancePolicy& tol = {});
bool proj_equal(const Projection& p, const Projection& q, const TolerancePolicy& tol = {});
/// P and Q are orthogonal (PQ == 0).
bool proj_orthogonal(const Projection& p, const Projection& q, const TolerancePolicy& tol = {});

struct SpectralDecomposition {
  std::vector<double> eigenvalues;       // strictly increasing
  std::vector<Projection> eigenprojections;

  HermitianOperator reconstruct() const;
};

/// Eigendecomposition with single-linkage clustering of eigenvalues closer
/// than eps_eig. The cluster eigenvalue is the mean of its members.
SpectralDecomposition spectral_decompose(const HermitianOperator& a,
                                         const TolerancePolicy& tol = {});

/// Right-continuous step family. Before the first jump the family is 0;
/// cumulative[k] is its value on [jumps[k], jumps[k+1]).
class SpectralFamily {
 public:
  SpectralFamily() = default;
  /// Validates monotonicity and that the last value is the identity.
  SpectralFamily(std::vector<double> jumps, std::vector<Projection> cumulative,
                 const TolerancePolicy& tol = {});

  int dim() const { return dim_; }
  const std::vector<double>& jumps() const { return jumps_; }
  const std::vector<Projection>& cumulative() const { return cumulative_; }

  /// E_lambda.
  Projection at(double lambda) const;
  /// sum_k jumps[k] * (E_k - E_{k-1}).
  HermitianOperator integrate() const;

 private:
  int dim_ = 0;
  std::vector<double> jumps_;
  std::vector<Projection> cumulative_;
};

SpectralFamily spectral_family(const HermitianOperator& a, const TolerancePolicy& tol = {});

/// A <=_s B iff E^B_lambda <= E^A_lambda for every lambda. Both families are
/// step functions, so it suffices to compare at the union of jump points.
bool spectral_order_leq(const HermitianOperator& a, const HermitianOperator& b,
                        const TolerancePolicy& tol = {});

enum class LatticeOp { Meet, Join };

/// Meet: projection onto range(P) & range(Q); join: onto range(P) + range(Q).
Projection projection_meet_join(const Projection& p, const Projection& q, LatticeOp which,
                                const TolerancePolicy& tol = {});
inline Projection meet(const Projection& p, const Projection& q, const TolerancePolicy& tol = {}) {
  return projection_meet_join(p, q, LatticeOp::Meet, tol);
}
inline Projection join(const Projection& p, const Projection& q, const TolerancePolicy& tol = {}) {
  return projection_meet_join(p, q, LatticeOp::Join, tol);
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// E[A in [lo, hi]]: sum of the eigenprojections whose eigenvalue lies in the
/// closed interval (membership widened by eps_eig).
Projection proposition_projector(const HermitianOperator& a, Interval delta,
                                 const TolerancePolicy& tol = {});

class StateVector {
 public:
  StateVector() = default;
  /// Requires unit norm within eps_matrix; use normalized() for raw input.
  explicit StateVector(const Vector& amplitudes, const TolerancePolicy& tol = {});
  static StateVector normalized(const Vector& amplitudes);

  int dim() const { return static_cast<int>(v_.size()); }
  const Vector& amplitudes() const { return v_; }
  Projection projector() const { return Projection::onto(v_); }

 private:
  Vector v_;
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  /// Positive semidefinite and unit trace within eps_eig.
  explicit DensityMatrix(const HermitianOperator& op, const TolerancePolicy& tol = {});
  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }

 private:
  HermitianOperator op_;
};

/// Kronecker product of two matrices.
Matrix kron(const Matrix& a, const Matrix& b);
/// Block-diagonal direct sum.
Matrix direct_sum(const Matrix& a, const Matrix& b);

/// Applies a real function to A through its spectral decomposition.
template <typename F>
HermitianOperator apply_function(const HermitianOperator& a, F&& f, const TolerancePolicy& tol = {}) {
  auto dec = spectral_decompose(a, tol);
  Matrix out = Matrix::Zero(a.dim(), a.dim());
  for (std::size_t i = 0; i < dec.eigenvalues.size(); ++i)
    out += f(dec.eigenvalues[i]) * dec.eigenprojections[i].matrix();
  return HermitianOperator(out, tol);
}

}  // namespace tqt
