// Copyright 2026 The oscnet Authors
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

#include "oscnet/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "oscnet/errors.hpp"

namespace oscnet {

namespace {

// Reciprocal condition estimate below which the dense LU is not trusted.
constexpr double kMinReciprocalCondition = 1e-14;

}  // namespace

LyapunovSolver::LyapunovSolver(const CMatrix& A) {
  if (A.rows() != A.cols()) throw ModelError("LyapunovSolver: matrix must be square");
  Eigen::ComplexSchur<CMatrix> schur(A);
  if (schur.info() != Eigen::Success) throw NumericError("LyapunovSolver: Schur decomposition failed");
  schur_u_ = schur.matrixU();
  schur_t_ = schur.matrixT();
  eigenvalues_ = schur_t_.diagonal();
}

CMatrix LyapunovSolver::solve(const CMatrix& rhs) const {
  const auto n = schur_t_.rows();
  if (rhs.rows() != n || rhs.cols() != n) throw ModelError("LyapunovSolver: rhs shape mismatch");

  // T Y + Y T^H = U^H Q U, solved column by column from the right since T^H is
  // lower triangular.
  const CMatrix q = schur_u_.adjoint() * rhs * schur_u_;
  CMatrix y = CMatrix::Zero(n, n);
  CMatrix shifted = schur_t_;
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    CVector column = q.col(j);
    for (Eigen::Index i = j + 1; i < n; ++i) column -= std::conj(schur_t_(j, i)) * y.col(i);
    shifted.diagonal() = schur_t_.diagonal().array() + std::conj(schur_t_(j, j));
    y.col(j) = shifted.triangularView<Eigen::Upper>().solve(column);
  }
  return schur_u_ * y * schur_u_.adjoint();
}

double LyapunovSolver::spectral_abscissa() const {
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) best = std::max(best, eigenvalues_(i).real());
  return best;
}

double LyapunovSolver::min_separation() const {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) {
    for (Eigen::Index j = 0; j < eigenvalues_.size(); ++j) {
      best = std::min(best, std::abs(eigenvalues_(i) + std::conj(eigenvalues_(j))));
    }
  }
  return best;
}

CMatrix vectorized_lyapunov_operator(const CMatrix& A) {
  const auto n = A.rows();
  CMatrix op = CMatrix::Zero(n * n, n * n);
  // Column-major vec: vec(A X) = kron(I, A) vec X, vec(X A^H) = kron(conj A, I) vec X.
  for (Eigen::Index b = 0; b < n; ++b) {
    op.block(b * n, b * n, n, n) += A;
    for (Eigen::Index a = 0; a < n; ++a) {
      op.block(a * n, b * n, n, n).diagonal().array() += std::conj(A(a, b));
    }
  }
  return op;
}

CMatrix solve_vectorized(const CMatrix& op, const CMatrix& rhs) {
  const auto n = rhs.rows();
  const auto m = rhs.cols();
  if (op.rows() != n * m || op.cols() != n * m) throw ModelError("solve_vectorized: shape mismatch");

  Eigen::PartialPivLU<CMatrix> lu(op);
  if (!(lu.rcond() > kMinReciprocalCondition)) {
    Eigen::BDCSVD<CMatrix> svd(op);
    const auto& sv = svd.singularValues();
    std::ostringstream os;
    os << "vectorized linear system is singular or ill-conditioned: smallest singular value "
       << sv(sv.size() - 1) << " (largest " << sv(0) << ")";
    throw NumericError(os.str());
  }
  const CVector x = lu.solve(rhs.reshaped());
  return x.reshaped(n, m);
}

}  // namespace oscnet
