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

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "oscnet/network.hpp"
#include "oscnet/types.hpp"

namespace oscnet {

/// Gaussian state in terms of its reduced moments:
///   C_ij = <a_j^dag a_i> - <a_j^dag><a_i>,
///   S_ij = <a_i a_j> - <a_i><a_j>,
///   mu_k = <a_k>.
struct ReducedState {
  CMatrix C;
  CMatrix S;
  CVector mu;

  std::size_t size() const { return static_cast<std::size_t>(C.rows()); }

  /// <a_k^dag a_k>, including the coherent part |mu_k|^2.
  double occupation(std::size_t k) const;
  /// <a_k^dag a_l> = C_lk + conj(mu_k) mu_l.
  Complex second_moment(std::size_t k, std::size_t l) const;

  static ReducedState vacuum(std::size_t modes);
  static ReducedState thermal(const RVector& occupations);
};

/// The 2L x 2L covariance matrix in the interleaved ordering
/// (a_1, a_1^dag, ..., a_L, a_L^dag); row 2k <-> a_k, row 2k+1 <-> a_k^dag
/// (0-based).
struct FullCovariance {
  CMatrix theta;
};

/// Violations of the ReducedState invariants (shapes, Hermitian C with real
/// non-negative diagonal, symmetric S); empty iff valid. Positive definiteness
/// of the assembled matrix is checked where it is needed.
std::vector<std::string> validate(const ReducedState& state);
void require_valid(const ReducedState& state);

/// Per mode block (k,l): [[C_kl + delta/2, S_kl], [conj S_kl, conj C_kl + delta/2]].
FullCovariance assemble_full_cm(const ReducedState& state);

/// Inverse of the assembled covariance from its block structure: with
/// Cbar = C + I/2, B = [Cbar - S conj(Cbar)^{-1} S^*]^{-1} and
/// P = -Cbar^{-1} S B^T, the (k,l) block of the inverse is
/// [[B_kl, P_kl], [conj P_kl, conj B_kl]].
/// Throws NumericError when Cbar or the Schur complement is not positive
/// definite.
FullCovariance inverse_full_cm(const ReducedState& state);

/// Reads (C, S) back out of an interleaved covariance matrix. The means are
/// not part of theta, so the returned state has mu = 0.
ReducedState read_back(const FullCovariance& cov);

/// ln det(theta) via Cholesky. Throws NumericError if theta is not positive
/// definite.
double log_det_full_cm(const ReducedState& state);

/// Interleaved phase-space vector (alpha_1, conj alpha_1, ..., alpha_L, conj alpha_L).
CVector interleave(const CVector& alpha);

/// Closed-form Gaussian Wigner function with everything that depends only on the
/// state precomputed. Phase-space points are length-L complex vectors alpha;
/// densities are with respect to prod_k d Re(alpha_k) d Im(alpha_k).
class GaussianWigner {
 public:
  explicit GaussianWigner(const ReducedState& state);

  std::size_t size() const { return modes_; }
  double density(const CVector& alpha) const;
  double log_density(const CVector& alpha) const;
  /// Wirtinger derivative d ln W / d conj(alpha_k) = -[theta^{-1}(alpha_bar - mu_bar)]_{a_k row}.
  Complex dlog_dconj(const CVector& alpha, std::size_t k) const;

  const CMatrix& inverse() const { return inverse_; }
  double log_det() const { return log_det_; }

 private:
  std::size_t modes_;
  CVector mean_;     // interleaved
  CMatrix inverse_;  // theta^{-1}
  double log_det_;
  double log_norm_;  // -L ln(pi) - ln(det theta)/2
};

/// W(alpha) = exp(-(alpha_bar - mu_bar)^dag theta^{-1} (alpha_bar - mu_bar) / 2)
///            / (pi^L sqrt(det theta)).
double wigner_density_at(const ReducedState& state, const CVector& alpha);

/// Local-equilibrium product state C = diag(n_k), S = 0, mu = 0. Requires
/// exactly one bath per mode; throws ModelError otherwise.
ReducedState thermal_reference(const NetworkSpec& spec);

/// Shannon entropy of the Wigner function: L (1 + ln pi) + ln det(theta) / 2.
double wigner_entropy(const ReducedState& state);

/// Kullback-Leibler divergence between two Gaussian Wigner functions.
double wigner_relative_entropy(const ReducedState& state, const ReducedState& reference);

/// Real covariance of (x_1, p_1, ..., x_L, p_L) with alpha_k = (x_k + i p_k)/sqrt(2).
RMatrix real_form_covariance(const ReducedState& state);

/// Draws phase-space points distributed according to the Wigner function.
class WignerSampler {
 public:
  explicit WignerSampler(const ReducedState& state);
  CVector draw(std::mt19937_64& rng) const;

 private:
  RVector mean_;    // real form
  RMatrix factor_;  // lower Cholesky factor of the real-form covariance
};

}  // namespace oscnet
