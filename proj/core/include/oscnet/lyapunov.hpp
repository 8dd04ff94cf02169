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

#pragma once

#include "oscnet/types.hpp"

namespace oscnet {

/// Continuous Lyapunov equation A X + X A^H = Q solved by the Bartels-Stewart
/// method on the complex Schur form A = U T U^H. The factorization is done once
/// in the constructor, so repeated right-hand sides cost O(n^3) each without a
/// new Schur decomposition.
class LyapunovSolver {
 public:
  explicit LyapunovSolver(const CMatrix& A);

  CMatrix solve(const CMatrix& rhs) const;

  const CVector& eigenvalues() const { return eigenvalues_; }
  /// max Re(lambda_i); negative iff A is Hurwitz.
  double spectral_abscissa() const;
  /// min |lambda_i + conj(lambda_j)|, the smallest eigenvalue magnitude of the
  /// operator X -> A X + X A^H. Zero means the equation is singular.
  double min_separation() const;

 private:
  CMatrix schur_u_;
  CMatrix schur_t_;
  CVector eigenvalues_;
};

/// Matrix of X -> A X + X A^H acting on column-major vec(X):
/// kron(I, A) + kron(conj(A), I).
CMatrix vectorized_lyapunov_operator(const CMatrix& A);

/// Dense LU solve of op * vec(X) = vec(rhs), returning X with rhs's shape.
/// Throws NumericError naming the smallest singular value of op when the
/// system is numerically singular.
CMatrix solve_vectorized(const CMatrix& op, const CMatrix& rhs);

}  // namespace oscnet
