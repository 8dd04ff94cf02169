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

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "oscnet/errors.hpp"
#include "oscnet/lyapunov.hpp"

namespace oscnet {
namespace {

using testing::Rng;

CMatrix stable_matrix(std::size_t n, Rng& rng) {
  const CMatrix H = testing::random_hamiltonian(n, rng);
  CMatrix A = -Complex(0.0, 1.0) * H;
  for (Eigen::Index k = 0; k < A.rows(); ++k) A(k, k) -= rng.uniform(0.1, 1.0);
  return A;
}

CMatrix random_hermitian(std::size_t n, Rng& rng) {
  const auto N = static_cast<Eigen::Index>(n);
  CMatrix Q(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) Q(i, j) = rng.complex_normal();
  }
  return Q + Q.adjoint();
}

TEST(LyapunovSolver, ResidualIsSmall) {
  Rng rng(31);
  for (std::size_t n : {1u, 2u, 5u, 12u, 40u}) {
    const CMatrix A = stable_matrix(n, rng);
    const CMatrix Q = random_hermitian(n, rng);
    const LyapunovSolver solver(A);
    const CMatrix X = solver.solve(Q);
    EXPECT_LT((A * X + X * A.adjoint() - Q).norm(), 1e-11 * Q.norm()) << "n=" << n;
    EXPECT_LT((X - X.adjoint()).norm(), 1e-11 * X.norm());
  }
}

TEST(LyapunovSolver, NonHermitianRightHandSide) {
  Rng rng(32);
  const CMatrix A = stable_matrix(6, rng);
  CMatrix Q(6, 6);
  for (Eigen::Index i = 0; i < 6; ++i) {
    for (Eigen::Index j = 0; j < 6; ++j) Q(i, j) = rng.complex_normal();
  }
  const CMatrix X = LyapunovSolver(A).solve(Q);
  EXPECT_LT((A * X + X * A.adjoint() - Q).norm(), 1e-11 * Q.norm());
}

TEST(LyapunovSolver, AgreesWithVectorizedOperator) {
  Rng rng(33);
  const CMatrix A = stable_matrix(5, rng);
  const CMatrix Q = random_hermitian(5, rng);
  const CMatrix a = LyapunovSolver(A).solve(Q);
  const CMatrix b = solve_vectorized(vectorized_lyapunov_operator(A), Q);
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(LyapunovSolver, SpectralDiagnostics) {
  CMatrix A = CMatrix::Zero(2, 2);
  A(0, 0) = Complex(-1.0, 2.0);
  A(1, 1) = Complex(-0.25, -1.0);
  const LyapunovSolver s(A);
  EXPECT_NEAR(s.spectral_abscissa(), -0.25, 1e-14);
  // |lambda_i + conj(lambda_j)| smallest at i = j = 1: 0.5
  EXPECT_NEAR(s.min_separation(), 0.5, 1e-14);
}

TEST(VectorizedOperator, KroneckerLayout) {
  Rng rng(34);
  const CMatrix A = stable_matrix(3, rng);
  const CMatrix op = vectorized_lyapunov_operator(A);
  CMatrix X(3, 3);
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) X(i, j) = rng.complex_normal();
  }
  const CMatrix Y = A * X + X * A.adjoint();
  const CVector y = op * Eigen::Map<const CVector>(X.data(), 9);
  EXPECT_LT((y - Eigen::Map<const CVector>(Y.data(), 9)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(VectorizedOperator, SingularSystemThrows) {
  const CMatrix A = CMatrix::Zero(2, 2);
  EXPECT_THROW(solve_vectorized(vectorized_lyapunov_operator(A), CMatrix::Identity(2, 2)), NumericError);
}

}  // namespace
}  // namespace oscnet
