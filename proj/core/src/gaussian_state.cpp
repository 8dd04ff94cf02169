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

#include "oscnet/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "oscnet/errors.hpp"

namespace oscnet {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kGibbsSlack = 1e-12;

double scaled_tolerance(const CMatrix& m) {
  return kSymmetryTolerance * std::max(1.0, m.cwiseAbs().maxCoeff());
}

Eigen::LLT<CMatrix> cholesky_or_throw(const CMatrix& m, const char* what) {
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NumericError(std::string(what) + " is not positive definite");
  }
  return llt;
}

double log_det_from(const Eigen::LLT<CMatrix>& llt) {
  const auto& factor = llt.matrixLLT();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < factor.rows(); ++i) sum += std::log(factor(i, i).real());
  return 2.0 * sum;
}

}  // namespace

double ReducedState::occupation(std::size_t k) const {
  const auto i = static_cast<Eigen::Index>(k);
  return C(i, i).real() + std::norm(mu(i));
}

Complex ReducedState::second_moment(std::size_t k, std::size_t l) const {
  const auto i = static_cast<Eigen::Index>(k);
  const auto j = static_cast<Eigen::Index>(l);
  return C(j, i) + std::conj(mu(i)) * mu(j);
}

ReducedState ReducedState::vacuum(std::size_t modes) {
  const auto L = static_cast<Eigen::Index>(modes);
  return {CMatrix::Zero(L, L), CMatrix::Zero(L, L), CVector::Zero(L)};
}

ReducedState ReducedState::thermal(const RVector& occupations) {
  const auto L = occupations.size();
  ReducedState state{CMatrix::Zero(L, L), CMatrix::Zero(L, L), CVector::Zero(L)};
  state.C.diagonal() = occupations.cast<Complex>();
  return state;
}

std::vector<std::string> validate(const ReducedState& state) {
  std::vector<std::string> violations;
  const auto L = state.C.rows();
  if (L == 0 || state.C.cols() != L || state.S.rows() != L || state.S.cols() != L ||
      state.mu.size() != L) {
    std::ostringstream os;
    os << "inconsistent shapes: C " << state.C.rows() << "x" << state.C.cols() << ", S "
       << state.S.rows() << "x" << state.S.cols() << ", mu " << state.mu.size();
    violations.push_back(os.str());
    return violations;
  }
  const double c_tol = scaled_tolerance(state.C);
  const double s_tol = scaled_tolerance(state.S);
  for (Eigen::Index i = 0; i < L; ++i) {
    if (std::abs(state.C(i, i).imag()) > c_tol || state.C(i, i).real() < -c_tol) {
      violations.push_back("C diagonal entry " + std::to_string(i + 1) +
                           " must be real and non-negative");
    }
    for (Eigen::Index j = i + 1; j < L; ++j) {
      if (std::abs(state.C(i, j) - std::conj(state.C(j, i))) > c_tol) {
        violations.push_back("C is not Hermitian at (" + std::to_string(i + 1) + "," +
                             std::to_string(j + 1) + ")");
      }
      if (std::abs(state.S(i, j) - state.S(j, i)) > s_tol) {
        violations.push_back("S is not symmetric at (" + std::to_string(i + 1) + "," +
                             std::to_string(j + 1) + ")");
      }
    }
  }
  return violations;
}

void require_valid(const ReducedState& state) {
  const auto violations = validate(state);
  if (violations.empty()) return;
  std::string message = "invalid Gaussian state:";
  for (const auto& v : violations) message += "\n  " + v;
  throw ModelError(message);
}

FullCovariance assemble_full_cm(const ReducedState& state) {
  require_valid(state);
  const auto L = state.C.rows();
  CMatrix theta(2 * L, 2 * L);
  for (Eigen::Index k = 0; k < L; ++k) {
    for (Eigen::Index l = 0; l < L; ++l) {
      const double half = (k == l) ? 0.5 : 0.0;
      theta(2 * k, 2 * l) = state.C(k, l) + half;
      theta(2 * k, 2 * l + 1) = state.S(k, l);
      theta(2 * k + 1, 2 * l) = std::conj(state.S(k, l));
      theta(2 * k + 1, 2 * l + 1) = std::conj(state.C(k, l)) + half;
    }
  }
  return {std::move(theta)};
}

FullCovariance inverse_full_cm(const ReducedState& state) {
  require_valid(state);
  const auto L = state.C.rows();
  const CMatrix shifted = state.C + 0.5 * CMatrix::Identity(L, L);
  const auto shifted_llt = cholesky_or_throw(shifted, "C + I/2 (singular covariance)");
  const CMatrix shifted_inv = shifted_llt.solve(CMatrix::Identity(L, L));

  CMatrix B;
  CMatrix P;
  if (state.S.isZero(0.0)) {
    B = shifted_inv;
    P = CMatrix::Zero(L, L);
  } else {
    const CMatrix schur = shifted - state.S * shifted_inv.conjugate() * state.S.conjugate();
    const auto schur_llt =
        cholesky_or_throw(0.5 * (schur + schur.adjoint()), "Schur complement (singular covariance)");
    B = schur_llt.solve(CMatrix::Identity(L, L));
    P = -shifted_inv * state.S * B.transpose();
  }

  CMatrix inverse(2 * L, 2 * L);
  for (Eigen::Index k = 0; k < L; ++k) {
    for (Eigen::Index l = 0; l < L; ++l) {
      inverse(2 * k, 2 * l) = B(k, l);
      inverse(2 * k, 2 * l + 1) = P(k, l);
      inverse(2 * k + 1, 2 * l) = std::conj(P(k, l));
      inverse(2 * k + 1, 2 * l + 1) = std::conj(B(k, l));
    }
  }
  return {std::move(inverse)};
}

ReducedState read_back(const FullCovariance& cov) {
  const auto L = cov.theta.rows() / 2;
  ReducedState state{CMatrix(L, L), CMatrix(L, L), CVector::Zero(L)};
  for (Eigen::Index k = 0; k < L; ++k) {
    for (Eigen::Index l = 0; l < L; ++l) {
      state.C(k, l) = cov.theta(2 * k, 2 * l) - ((k == l) ? 0.5 : 0.0);
      state.S(k, l) = cov.theta(2 * k, 2 * l + 1);
    }
  }
  return state;
}

double log_det_full_cm(const ReducedState& state) {
  const auto theta = assemble_full_cm(state).theta;
  return log_det_from(cholesky_or_throw(theta, "covariance matrix"));
}

CVector interleave(const CVector& alpha) {
  CVector out(2 * alpha.size());
  for (Eigen::Index k = 0; k < alpha.size(); ++k) {
    out(2 * k) = alpha(k);
    out(2 * k + 1) = std::conj(alpha(k));
  }
  return out;
}

GaussianWigner::GaussianWigner(const ReducedState& state)
    : modes_(state.size()), mean_(interleave(state.mu)) {
  const CMatrix theta = assemble_full_cm(state).theta;
  const auto llt = cholesky_or_throw(theta, "covariance matrix");
  const CMatrix inv = llt.solve(CMatrix::Identity(theta.rows(), theta.cols()));
  inverse_ = 0.5 * (inv + inv.adjoint());
  log_det_ = log_det_from(llt);
  log_norm_ = -static_cast<double>(modes_) * std::log(std::numbers::pi) - 0.5 * log_det_;
}

double GaussianWigner::log_density(const CVector& alpha) const {
  const CVector v = interleave(alpha) - mean_;
  const double quadratic = v.dot(inverse_ * v).real();
  return log_norm_ - 0.5 * quadratic;
}

double GaussianWigner::density(const CVector& alpha) const { return std::exp(log_density(alpha)); }

Complex GaussianWigner::dlog_dconj(const CVector& alpha, std::size_t k) const {
  const CVector v = interleave(alpha) - mean_;
  return -(inverse_.row(2 * static_cast<Eigen::Index>(k)) * v).value();
}

double wigner_density_at(const ReducedState& state, const CVector& alpha) {
  if (alpha.size() != state.mu.size()) {
    throw ModelError("wigner_density_at: phase-space point has wrong dimension");
  }
  return GaussianWigner(state).density(alpha);
}

ReducedState thermal_reference(const NetworkSpec& spec) {
  const std::size_t L = spec.size();
  RVector occupations = RVector::Zero(static_cast<Eigen::Index>(L));
  std::vector<std::size_t> counts(L, 0);
  for (const auto& bath : spec.baths) {
    if (bath.mode >= L) throw ModelError("thermal_reference: bath mode out of range");
    if (bath.kind == BathKind::kSelfConsistent) {
      throw ModelError(
          "thermal_reference: self-consistent baths have no fixed reference occupation");
    }
    ++counts[bath.mode];
    occupations(static_cast<Eigen::Index>(bath.mode)) = bath.occupation;
  }
  for (std::size_t k = 0; k < L; ++k) {
    if (counts[k] != 1) {
      throw ModelError("thermal_reference: mode " + std::to_string(k + 1) + " has " +
                       std::to_string(counts[k]) +
                       " baths; the local-equilibrium reference needs exactly one");
    }
  }
  return ReducedState::thermal(occupations);
}

double wigner_entropy(const ReducedState& state) {
  const double L = static_cast<double>(state.size());
  return L * (1.0 + std::log(std::numbers::pi)) + 0.5 * log_det_full_cm(state);
}

double wigner_relative_entropy(const ReducedState& state, const ReducedState& reference) {
  if (state.size() != reference.size()) {
    throw ModelError("wigner_relative_entropy: dimension mismatch");
  }
  if (state.C == reference.C && state.S == reference.S && state.mu == reference.mu) return 0.0;

  const CMatrix theta = assemble_full_cm(state).theta;
  const CMatrix theta_ref = assemble_full_cm(reference).theta;
  const auto llt = cholesky_or_throw(theta, "covariance matrix");
  const auto llt_ref = cholesky_or_throw(theta_ref, "reference covariance matrix");

  const double dim = static_cast<double>(theta.rows());
  const double trace = llt_ref.solve(theta).trace().real();
  const CVector delta = interleave(state.mu) - interleave(reference.mu);
  const double mahalanobis = delta.dot(llt_ref.solve(delta)).real();
  const double value =
      0.5 * (trace - dim + mahalanobis + log_det_from(llt_ref) - log_det_from(llt));
  if (value < 0.0 && value > -kGibbsSlack) return 0.0;
  return value;
}

RMatrix real_form_covariance(const ReducedState& state) {
  const CMatrix theta = assemble_full_cm(state).theta;
  const auto L = static_cast<Eigen::Index>(state.size());
  const double r = 1.0 / std::numbers::sqrt2;
  CMatrix T = CMatrix::Zero(2 * L, 2 * L);
  for (Eigen::Index k = 0; k < L; ++k) {
    T(2 * k, 2 * k) = r;
    T(2 * k, 2 * k + 1) = r;
    T(2 * k + 1, 2 * k) = Complex(0.0, -r);
    T(2 * k + 1, 2 * k + 1) = Complex(0.0, r);
  }
  const CMatrix sigma = T * theta * T.adjoint();
  const RMatrix real = sigma.real();
  return 0.5 * (real + real.transpose());
}

WignerSampler::WignerSampler(const ReducedState& state) {
  const RMatrix sigma = real_form_covariance(state);
  Eigen::LLT<RMatrix> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw NumericError("WignerSampler: covariance matrix is not positive definite");
  }
  factor_ = llt.matrixL();
  const auto L = state.mu.size();
  mean_.resize(2 * L);
  for (Eigen::Index k = 0; k < L; ++k) {
    mean_(2 * k) = std::numbers::sqrt2 * state.mu(k).real();
    mean_(2 * k + 1) = std::numbers::sqrt2 * state.mu(k).imag();
  }
}

CVector WignerSampler::draw(std::mt19937_64& rng) const {
  std::normal_distribution<double> normal;
  RVector z(mean_.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
  const RVector y = mean_ + factor_ * z;
  const auto L = y.size() / 2;
  CVector alpha(L);
  for (Eigen::Index k = 0; k < L; ++k) {
    alpha(k) = Complex(y(2 * k), y(2 * k + 1)) / std::numbers::sqrt2;
  }
  return alpha;
}

}  // namespace oscnet
