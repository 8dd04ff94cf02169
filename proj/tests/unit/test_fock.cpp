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

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "oscnet/chain.hpp"
#include "oscnet/dynamics.hpp"
#include "oscnet/errors.hpp"
#include "oscnet/fock.hpp"

namespace oscnet {
namespace {

using testing::Rng;

CMatrix random_density(Eigen::Index dim, Rng& rng) {
  CMatrix G(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) G(i, j) = rng.complex_normal();
  }
  CMatrix rho = G * G.adjoint();
  return rho / rho.trace();
}

NetworkSpec single_mode(double rate, double n) {
  NetworkSpec spec;
  spec.hamiltonian = CMatrix::Constant(1, 1, 1.0);
  spec.baths = {{.mode = 0, .rate = rate, .occupation = n}};
  return spec;
}

TEST(LadderOperators, MatchDenseKroneckerProducts) {
  for (std::size_t k = 0; k < 3; ++k) {
    const CMatrix ref = testing::dense_annihilation(3, 3, k);
    EXPECT_LT((annihilation_operator(3, 3, k).dense() - ref).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((creation_operator(3, 3, k).dense() - ref.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(LadderOperators, CompositionIsMatrixProduct) {
  const auto a0 = annihilation_operator(2, 4, 0);
  const auto c1 = creation_operator(2, 4, 1);
  const auto c0 = creation_operator(2, 4, 0);
  EXPECT_LT((compose(c0, a0).dense() - c0.dense() * a0.dense()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((compose(c1, a0).dense() - c1.dense() * a0.dense()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((compose(a0, c0).dense() - a0.dense() * c0.dense()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(FockModel, MatchesDenseLindbladian) {
  Rng rng(81);
  for (int trial = 0; trial < 4; ++trial) {
    NetworkSpec spec = testing::random_single_bath_network(2, rng);
    const std::size_t n_max = 3 + rng.index(3);
    const auto dim = static_cast<Eigen::Index>((n_max + 1) * (n_max + 1));
    const CMatrix rho = random_density(dim, rng);
    const FockModel model(spec, n_max);
    const CMatrix ref = testing::dense_lindblad_apply(spec, n_max, rho);
    EXPECT_LT((model.apply(rho) - ref).cwiseAbs().maxCoeff(), 1e-12) << "trial " << trial;
  }
}

TEST(FockModel, SelfConsistentBathsUseSuppliedOccupations) {
  const auto spec = build_chain({.length = 3, .lambda = 0.2, .gamma = 0.3, .n1 = 0.5, .nL = 1.0, .Gamma = 0.1});
  const RVector sc = (RVector(3) << 0.6, 0.7, 0.9).finished();
  Rng rng(82);
  const CMatrix rho = random_density(27, rng);
  const CMatrix got = apply_generator({3, 2, rho}, spec, sc);
  EXPECT_LT((got - testing::dense_lindblad_apply(spec, 2, rho, &sc)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(apply_generator({3, 2, rho}, spec), ModelError);
}

TEST(FockModel, ThermalProductIsFixedPointWithoutCoupling) {
  NetworkSpec spec;
  spec.hamiltonian = CMatrix::Zero(2, 2);
  spec.hamiltonian(0, 0) = 1.0;
  spec.hamiltonian(1, 1) = 1.4;
  spec.baths = {{.mode = 0, .rate = 0.5, .occupation = 0.4}, {.mode = 1, .rate = 0.2, .occupation = 0.9}};
  // truncated a a^dag has no top-level gain, so the cut thermal state stays exactly stationary
  const auto st = fock_thermal((RVector(2) << 0.4, 0.9).finished(), 6);
  EXPECT_LT((st.rho - testing::dense_thermal((RVector(2) << 0.4, 0.9).finished(), 6)).cwiseAbs().maxCoeff(), 1e-15);
  const CMatrix d = apply_generator(st, spec);
  EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FockModel, VacuumGainRate) {
  const auto spec = single_mode(0.7, 1.3);
  const auto st = fock_vacuum(1, 5);
  const CMatrix d = apply_generator(st, spec);
  const CMatrix num = compose(creation_operator(1, 5, 0), annihilation_operator(1, 5, 0)).dense();
  EXPECT_NEAR((num * d).trace().real(), 0.7 * 1.3, 1e-14);
}

TEST(FockModel, TraceAndHermiticityPreserved) {
  Rng rng(83);
  const auto spec = testing::random_single_bath_network(2, rng);
  const CMatrix rho = random_density(16, rng);
  const CMatrix d = apply_generator({2, 3, rho}, spec);
  EXPECT_LT(std::abs(d.trace()), 1e-13);
  EXPECT_LT((d - d.adjoint()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(FockModel, GeneratorIsLinear) {
  Rng rng(84);
  const auto spec = testing::random_single_bath_network(2, rng);
  const FockModel model(spec, 4);
  const CMatrix r1 = random_density(25, rng);
  const CMatrix r2 = random_density(25, rng);
  const Complex a(0.3, -1.1), b(2.0, 0.4);
  const CMatrix lhs = model.apply(a * r1 + b * r2);
  const CMatrix rhs = a * model.apply(r1) + b * model.apply(r2);
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FockModel, DimensionGuard) {
  Rng rng(85);
  const auto spec = testing::random_single_bath_network(3, rng);
  EXPECT_THROW(FockModel(spec, 30), ModelError);
}

TEST(EvolveFock, SingleModeThermalizes) {
  const auto spec = single_mode(1.0, 1.0);
  // the n = 1 thermal state keeps 2^-26 in level 25, above the default tail bound
  FockEvolveOptions o;
  o.tail_tolerance = 2e-8;
  const auto st = evolve_fock(fock_vacuum(1, 25), spec, 15.0, 0.01, o);
  EXPECT_NEAR(extract_covariances(st).C(0, 0).real(), 1.0, 1e-4);
  EXPECT_TRUE(validate(st).empty());
}

TEST(EvolveFock, ClosedTwoModesConserveNumber) {
  NetworkSpec spec;
  spec.hamiltonian = CMatrix::Identity(2, 2);
  spec.hamiltonian(0, 1) = Complex(0.0, 0.3);
  spec.hamiltonian(1, 0) = Complex(0.0, -0.3);
  // (|1,0> + |0,1>)/sqrt 2 with n_max = 2: index = 3 n_1 + n_2
  CMatrix rho = CMatrix::Zero(9, 9);
  rho(3, 3) = rho(1, 1) = rho(1, 3) = rho(3, 1) = 0.5;
  const TruncatedState start{2, 2, rho};
  const auto total = [](const TruncatedState& s) {
    const auto c = extract_covariances(s);
    return c.occupation(0) + c.occupation(1);
  };
  FockEvolveOptions o;
  o.tail_tolerance = 1.0;
  o.observe_every = 50;
  o.observer = [&](double, const TruncatedState& s) { EXPECT_NEAR(total(s), 1.0, 1e-8); };
  evolve_fock(start, spec, 10.0, 0.01, o);
}

TEST(EvolveFock, TailViolationAsksForLargerCutoff) {
  const auto spec = single_mode(1.0, 3.0);
  try {
    evolve_fock(fock_vacuum(1, 4), spec, 10.0, 0.01);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("n_max"), std::string::npos);
  }
}

TEST(EvolveFock, GaussianClosureOnSmallChain) {
  const auto spec = build_chain({.length = 2, .lambda = 0.3, .gamma = 0.5, .n1 = 0.1, .nL = 0.3});
  const std::size_t n_max = recommended_cutoff(0.3, 1e-9);
  const auto gen = build_generators(spec);
  EvolveOptions go;
  go.sample_every = 100;
  const auto ref = evolve(ReducedState::vacuum(2), gen, spec.hamiltonian, 10.0, 0.01, go);
  std::size_t i = 0;
  double worst = 0.0;
  FockEvolveOptions fo;
  fo.observe_every = 100;
  fo.observer = [&](double t, const TruncatedState& s) {
    ASSERT_NEAR(ref[i].time, t, 1e-12);
    const auto c = extract_covariances(s);
    worst = std::max(worst, (c.C - ref[i].state.C).cwiseAbs().maxCoeff());
    ++i;
  };
  evolve_fock(fock_vacuum(2, n_max), spec, 10.0, 0.01, fo);
  EXPECT_EQ(i, ref.size());
  EXPECT_LT(worst, 1e-6);
}

TEST(ExtractCovariances, ThermalProductAndCoherentState) {
  const RVector n = (RVector(2) << 0.2, 0.5).finished();
  const auto th = extract_covariances(fock_thermal(n, 30));
  EXPECT_LT((th.C - CMatrix(n.cast<Complex>().asDiagonal())).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT(th.S.cwiseAbs().maxCoeff(), 1e-15);

  const CVector alpha = (CVector(2) << Complex(0.3, 0.1), Complex(-0.2, 0.4)).finished();
  const auto co = extract_covariances(fock_coherent(alpha, 20));
  EXPECT_LT((co.mu - alpha).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(co.C.cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(co.S.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ExtractCovariances, HermitianAndSymmetricAfterEvolution) {
  const auto spec = build_chain({.length = 2, .lambda = 0.2, .gamma = 0.3, .n1 = 0.2, .nL = 0.4});
  const CVector alpha = (CVector(2) << Complex(0.3, 0.1), Complex(-0.2, 0.4)).finished();
  const auto st = evolve_fock(fock_coherent(alpha, 16), spec, 3.0, 0.01);
  const auto c = extract_covariances(st);
  EXPECT_LT((c.C - c.C.adjoint()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((c.S - c.S.transpose()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(TruncatedState, ValidationAndTopLevel) {
  auto st = fock_basis_state({2, 0}, 3);
  EXPECT_TRUE(validate(st).empty());
  EXPECT_EQ(top_level_populations(st)(0), 0.0);
  auto top = fock_basis_state({3, 1}, 3);
  EXPECT_DOUBLE_EQ(top_level_populations(top)(0), 1.0);
  st.rho(0, 0) += 0.1;
  EXPECT_FALSE(validate(st).empty());
  EXPECT_THROW(fock_basis_state({4}, 3), ModelError);
}

TEST(RecommendedCutoff, ThermalTailBelowThreshold) {
  for (double n : {0.0, 0.3, 0.6, 2.0}) {
    const std::size_t c = recommended_cutoff(n, 1e-9);
    const double q = n / (n + 1.0);
    EXPECT_LT(std::pow(q, double(c + 1)), 1e-9);
    if (n > 0.0 && c > 1) {
      EXPECT_GE(std::pow(q, double(c)), 1e-9);
    }
  }
}

}  // namespace
}  // namespace oscnet
