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
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "oscnet/errors.hpp"
#include "oscnet/gaussian_state.hpp"

namespace oscnet {
namespace {

using testing::Rng;

ReducedState single(double c, Complex s = 0.0, Complex mu = 0.0) {
  ReducedState st;
  st.C = CMatrix::Constant(1, 1, c);
  st.S = CMatrix::Constant(1, 1, s);
  st.mu = CVector::Constant(1, mu);
  return st;
}

TEST(AssembleFullCm, SingleModeThermalAndVacuum) {
  EXPECT_TRUE(assemble_full_cm(single(2.0)).theta.isApprox(CMatrix::Identity(2, 2) * 2.5));
  EXPECT_TRUE(assemble_full_cm(single(0.0)).theta.isApprox(CMatrix::Identity(2, 2) * 0.5));
}

TEST(AssembleFullCm, MatchesQuadratureExpansion) {
  Rng rng(11);
  for (std::size_t L : {1u, 2u, 3u, 5u}) {
    const auto st = testing::random_state(L, rng);
    const CMatrix theta = assemble_full_cm(st).theta;
    EXPECT_LT((theta - testing::full_cm_oracle(st)).cwiseAbs().maxCoeff(), 1e-12) << "L=" << L;
  }
}

TEST(AssembleFullCm, TwoModeReadBack) {
  Rng rng(12);
  const auto st = testing::random_state(2, rng);
  const auto back = read_back(assemble_full_cm(st));
  EXPECT_LT((back.C - st.C).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((back.S - st.S).cwiseAbs().maxCoeff(), 1e-14);
  // <a_1 a_2> sits at row a_1, column a_2^dag
  EXPECT_EQ(assemble_full_cm(st).theta(0, 3), st.S(0, 1));
}

TEST(InverseFullCm, SingleModeValues) {
  EXPECT_TRUE(inverse_full_cm(single(2.0)).theta.isApprox(CMatrix::Identity(2, 2) * 0.4));
  EXPECT_TRUE(inverse_full_cm(single(0.0)).theta.isApprox(CMatrix::Identity(2, 2) * 2.0));
}

TEST(InverseFullCm, MatchesDenseInverseWithSqueezing) {
  Rng rng(13);
  const auto st = testing::random_state(3, rng);
  ASSERT_GT(st.S.cwiseAbs().maxCoeff(), 0.05);
  const CMatrix dense = testing::full_cm_oracle(st).fullPivLu().inverse();
  const CMatrix inv = inverse_full_cm(st).theta;
  EXPECT_LT((inv - dense).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((inv * assemble_full_cm(st).theta - CMatrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(InverseFullCm, RejectsUnphysicalState) {
  // C = -0.6 makes C + 1/2 negative
  ReducedState st = single(0.0);
  st.C(0, 0) = -0.6;
  EXPECT_THROW(inverse_full_cm(st), Error);
}

TEST(LogDet, MatchesDeterminant) {
  Rng rng(14);
  const auto st = testing::random_state(3, rng);
  const double expected = std::log(testing::full_cm_oracle(st).determinant().real());
  EXPECT_NEAR(log_det_full_cm(st), expected, 1e-11);
}

TEST(WignerDensity, KnownValues) {
  CVector zero = CVector::Zero(1);
  EXPECT_NEAR(wigner_density_at(single(0.0), zero), 2.0 / std::numbers::pi, 1e-15);
  CVector one = CVector::Constant(1, 1.0);
  EXPECT_NEAR(wigner_density_at(single(2.0), one), std::exp(-0.4) / (2.5 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(wigner_density_at(single(2.0), one), 0.085348, 1e-6);
}

TEST(WignerDensity, PeakAtMean) {
  Rng rng(15);
  const auto st = testing::random_state(2, rng);
  const double expected =
      1.0 / (std::pow(std::numbers::pi, 2) * std::sqrt(testing::full_cm_oracle(st).determinant().real()));
  EXPECT_NEAR(wigner_density_at(st, st.mu) / expected, 1.0, 1e-12);
}

TEST(WignerDensity, MatchesRealFormGaussian) {
  Rng rng(16);
  for (int trial = 0; trial < 5; ++trial) {
    const auto st = testing::random_state(2, rng);
    for (int p = 0; p < 10; ++p) {
      CVector alpha = st.mu;
      for (Eigen::Index k = 0; k < 2; ++k) alpha(k) += rng.complex_normal();
      const double ref = testing::wigner_density_oracle(st, alpha);
      EXPECT_NEAR(wigner_density_at(st, alpha) / ref, 1.0, 1e-10);
    }
  }
}

TEST(WignerDensity, NormalizedOneMode) {
  Rng rng(17);
  const auto st = testing::random_state(1, rng);
  const double total = testing::phase_space_quadrature(st, 401, 12.0, [&](const CVector& a) {
    return wigner_density_at(st, a);
  });
  EXPECT_NEAR(total, 1.0, 1e-6);
}

TEST(WignerDensity, NormalizedTwoModes) {
  Rng rng(18);
  const auto st = testing::random_state(2, rng, {.max_occupation = 1.0, .max_squeezing = 0.2});
  const double total = testing::phase_space_quadrature(st, 31, 8.0, [&](const CVector& a) {
    return wigner_density_at(st, a);
  });
  EXPECT_NEAR(total, 1.0, 1e-6);
}

TEST(GaussianWigner, DerivativeMatchesFiniteDifference) {
  Rng rng(19);
  const auto st = testing::random_state(2, rng);
  const GaussianWigner w(st);
  const CVector alpha = st.mu + CVector::Constant(2, Complex(0.3, -0.2));
  for (std::size_t k = 0; k < 2; ++k) {
    // d/d conj(alpha) = (d/dx + i d/dy) / 2
    const double h = 1e-6;
    CVector ax = alpha, ay = alpha;
    ax(static_cast<Eigen::Index>(k)) += h;
    ay(static_cast<Eigen::Index>(k)) += Complex(0.0, h);
    CVector bx = alpha, by = alpha;
    bx(static_cast<Eigen::Index>(k)) -= h;
    by(static_cast<Eigen::Index>(k)) -= Complex(0.0, h);
    const double dx = (w.log_density(ax) - w.log_density(bx)) / (2 * h);
    const double dy = (w.log_density(ay) - w.log_density(by)) / (2 * h);
    const Complex fd = 0.5 * Complex(dx, dy);
    EXPECT_LT(std::abs(w.dlog_dconj(alpha, k) - fd), 1e-7);
  }
}

TEST(ThermalReference, SingleModeAndVacuumPair) {
  NetworkSpec one;
  one.hamiltonian = CMatrix::Identity(1, 1);
  one.baths = {{.mode = 0, .rate = 1.0, .occupation = 1.0}};
  const auto ref = thermal_reference(one);
  EXPECT_EQ(ref.C(0, 0), Complex(1.0));
  EXPECT_NEAR(assemble_full_cm(ref).theta(0, 0).real(), 1.5, 1e-15);

  NetworkSpec two;
  two.hamiltonian = CMatrix::Identity(2, 2);
  two.baths = {{.mode = 0, .rate = 1.0, .occupation = 0.0}, {.mode = 1, .rate = 2.0, .occupation = 0.0}};
  const auto vac = thermal_reference(two);
  EXPECT_EQ(vac.C.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(vac.S.cwiseAbs().maxCoeff(), 0.0);
}

TEST(ThermalReference, RejectsDoubleAttachment) {
  const auto spec = build_chain({.length = 3, .lambda = 0.1, .gamma = 0.1, .n1 = 1, .nL = 2, .Gamma = 0.1});
  EXPECT_THROW(thermal_reference(spec), ModelError);
}

TEST(WignerEntropy, ClosedFormValues) {
  EXPECT_NEAR(wigner_entropy(single(0.0)), 1.0 + std::log(std::numbers::pi / 2.0), 1e-14);
  EXPECT_NEAR(wigner_entropy(single(0.0)), 1.45158, 1e-5);
  EXPECT_NEAR(wigner_entropy(single(1.0)), 1.0 + std::log(std::numbers::pi) + std::log(1.5), 1e-14);
  EXPECT_NEAR(wigner_entropy(single(1.0)), 2.55020, 1e-5);
  EXPECT_NEAR(wigner_entropy(ReducedState::vacuum(2)), 2.0 * (1.0 + std::log(std::numbers::pi / 2.0)), 1e-14);
}

TEST(WignerEntropy, MatchesQuadrature) {
  for (double c : {0.0, 1.0}) {
    const auto st = single(c);
    const double q = testing::phase_space_quadrature(st, 401, 12.0, [&](const CVector& a) {
      const double w = testing::wigner_density_oracle(st, a);
      return w > 0.0 ? -w * std::log(w) : 0.0;
    });
    EXPECT_NEAR(wigner_entropy(st), q, 1e-7) << "c=" << c;
  }
  Rng rng(20);
  const auto st = testing::random_state(1, rng);
  const double q = testing::phase_space_quadrature(st, 401, 12.0, [&](const CVector& a) {
    const double w = testing::wigner_density_oracle(st, a);
    return w > 0.0 ? -w * std::log(w) : 0.0;
  });
  EXPECT_NEAR(wigner_entropy(st), q, 1e-7);
}

TEST(WignerRelativeEntropy, KnownValueAndQuadrature) {
  const auto st = single(2.0);
  const auto ref = single(1.0);
  const double expected = 0.5 * (2.0 * 2.5 / 1.5 - 2.0 + 2.0 * std::log(1.5 / 2.5));
  EXPECT_NEAR(wigner_relative_entropy(st, ref), expected, 1e-14);
  EXPECT_NEAR(wigner_relative_entropy(st, ref), 0.15584, 1e-5);
  const double q = testing::phase_space_quadrature(st, 401, 12.0, [&](const CVector& a) {
    const double w = testing::wigner_density_oracle(st, a);
    const double r = testing::wigner_density_oracle(ref, a);
    return w > 0.0 ? w * std::log(w / r) : 0.0;
  });
  EXPECT_NEAR(wigner_relative_entropy(st, ref), q, 1e-7);
}

TEST(WignerRelativeEntropy, SelfIsZeroAndShiftedMeansCount) {
  Rng rng(21);
  const auto st = testing::random_state(3, rng);
  EXPECT_EQ(wigner_relative_entropy(st, st), 0.0);
  auto shifted = st;
  shifted.mu(0) += 1.0;
  EXPECT_GT(wigner_relative_entropy(st, shifted), 0.0);
  EXPECT_THROW(wigner_relative_entropy(st, single(0.0)), ModelError);
}

TEST(RealForm, MatchesQuadratureExpansion) {
  Rng rng(22);
  const auto st = testing::random_state(3, rng);
  EXPECT_LT((real_form_covariance(st) - testing::real_form_oracle(st)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(WignerSampler, MomentsMatchCovariances) {
  Rng rng(23);
  const auto st = testing::random_state(2, rng);
  const WignerSampler sampler(st);
  const std::size_t n = 100000;
  // E[conj(alpha_k) alpha_l] = C_lk + conj(mu_k) mu_l + delta/2
  CMatrix sum = CMatrix::Zero(2, 2);
  CMatrix sq = CMatrix::Zero(2, 2);
  for (std::size_t s = 0; s < n; ++s) {
    const CVector a = sampler.draw(rng.engine());
    for (Eigen::Index k = 0; k < 2; ++k) {
      for (Eigen::Index l = 0; l < 2; ++l) {
        const Complex v = std::conj(a(k)) * a(l);
        sum(k, l) += v;
        sq(k, l) += Complex(v.real() * v.real(), v.imag() * v.imag());
      }
    }
  }
  for (Eigen::Index k = 0; k < 2; ++k) {
    for (Eigen::Index l = 0; l < 2; ++l) {
      const Complex mean = sum(k, l) / double(n);
      const Complex expect = st.C(l, k) + std::conj(st.mu(k)) * st.mu(l) + (k == l ? 0.5 : 0.0);
      const double se_re = std::sqrt((sq(k, l).real() / n - mean.real() * mean.real()) / n);
      const double se_im = std::sqrt((sq(k, l).imag() / n - mean.imag() * mean.imag()) / n);
      EXPECT_LT(std::abs(mean.real() - expect.real()), 4 * se_re + 1e-15);
      EXPECT_LT(std::abs(mean.imag() - expect.imag()), 4 * se_im + 1e-15);
    }
  }
}

TEST(ReducedState, ValidationCatchesDefects) {
  auto st = single(1.0);
  EXPECT_TRUE(validate(st).empty());
  st.C(0, 0) = Complex(1.0, 0.1);
  EXPECT_FALSE(validate(st).empty());
  ReducedState two = ReducedState::vacuum(2);
  two.S(0, 1) = 0.1;
  EXPECT_FALSE(validate(two).empty());
  EXPECT_THROW(require_valid(two), ModelError);
}

TEST(ReducedState, OccupationIncludesCoherentPart) {
  const auto st = single(0.5, 0.0, Complex(1.0, 1.0));
  EXPECT_DOUBLE_EQ(st.occupation(0), 2.5);
}

}  // namespace
}  // namespace oscnet
