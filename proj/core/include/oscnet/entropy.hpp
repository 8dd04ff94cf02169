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
#include <optional>
#include <random>
#include <vector>

#include "oscnet/gaussian_state.hpp"
#include "oscnet/network.hpp"
#include "oscnet/types.hpp"

namespace oscnet {

/// One dissipation channel: a bath of the given rate and reference occupation
/// acting on `mode` (0-based).
struct ChannelRef {
  std::size_t mode = 0;
  double rate = 0.0;
  double occupation = 0.0;
};

/// Phi_k = gamma_k (<a_k^dag a_k> - n_k) / (n_k + 1/2). Positive when entropy
/// flows out of the system into the bath.
double entropy_flux(const ReducedState& state, const ChannelRef& channel);

/// Pi_k = Phi_k - gamma_k + gamma_k (n_k + 1/2) [theta^{-1}]_{kk} with the
/// diagonal read at the a_k row. Round-off negatives down to -1e-12 max(1, rate)
/// are returned as 0; anything more negative throws NumericError.
double entropy_production_channel(const ReducedState& state, const ChannelRef& channel);
/// Same, reusing a precomputed inverse covariance (see inverse_full_cm).
double entropy_production_channel(const ReducedState& state, const ChannelRef& channel,
                                  const CMatrix& theta_inverse);

/// Reference occupation of every mode for networks with exactly one physical
/// bath per mode. Throws ModelError otherwise.
RVector single_bath_occupations(const NetworkSpec& spec);

/// NESS production written through coherences only:
/// sum_{k != l} 2/(n_k + 1/2) Im{H_kl <a_k^dag a_l>}.
double ness_production_bilinear(const ReducedState& state, const CMatrix& H,
                                const RVector& reference_occupations);
/// Overload that takes the reference occupations from the network (one bath per mode).
double ness_production_bilinear(const ReducedState& state, const NetworkSpec& spec);

/// 1/2 sum_{k != l} j_kl [1/(n_k + 1/2) - 1/(n_l + 1/2)].
double ness_production_onsager(const RMatrix& currents, const RVector& reference_occupations);

struct PhaseSpaceCurrents {
  Complex irreversible;  // J_k = (gamma/2) [alpha_k W + (n + 1/2) dW/d conj(alpha_k)]
  Complex reversible;    // A_k = i sum_l H_kl alpha_l W
};

/// Quasi-probability currents of one channel at the phase-space point alpha.
PhaseSpaceCurrents phase_space_currents(const ReducedState& state, const ChannelRef& channel,
                                        const CMatrix& H, const CVector& alpha);
/// J_k / W, which is linear in alpha for a Gaussian state.
Complex irreversible_velocity(const GaussianWigner& wigner, const ChannelRef& channel,
                              const CVector& alpha);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Pi_k = 4/(gamma_k (n_k + 1/2)) E_W[|J_k/W|^2] estimated from `samples` draws
/// of the Wigner function. Requires samples >= 1000 and a positive rate.
MonteCarloEstimate mc_production_estimate(const ReducedState& state, const ChannelRef& channel,
                                          std::size_t samples, std::mt19937_64& rng);

struct ChannelEntry {
  ChannelRef channel;
  BathKind kind = BathKind::kPhysical;
  double flux = 0.0;
  double production = 0.0;
};

struct EntropyReport {
  std::vector<ChannelEntry> channels;
  RVector flux_per_channel;
  RVector production_per_channel;
  double total_flux = 0.0;
  double total_production = 0.0;
  RMatrix currents;
  double wigner_entropy = 0.0;
};

/// One channel per bath attachment; self-consistent attachments use
/// `sc_occupations` as their reference occupation.
std::vector<ChannelEntry> channels_of(const NetworkSpec& spec,
                                      const std::optional<RVector>& sc_occupations = std::nullopt);

EntropyReport entropy_report(const ReducedState& state, const NetworkSpec& spec,
                             const std::optional<RVector>& sc_occupations = std::nullopt);

}  // namespace oscnet
