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
#include <vector>

#include "oscnet/gaussian_state.hpp"
#include "oscnet/network.hpp"
#include "oscnet/types.hpp"

namespace oscnet {

/// Linear generators of the covariance dynamics d(theta)/dt = W theta + theta W^H + F.
struct GeneratorSet {
  CMatrix drift;       // W, 2L x 2L in the interleaved ordering
  RVector diffusion;   // diagonal of F = f + Gamma/2, length 2L
  RVector gamma_diag;  // total damping rate per mode (all attachments summed)
  RVector f_diag;      // sum over attachments of rate * occupation, per mode
};

/// Per-mode totals of all attached baths. Self-consistent attachments take
/// their occupation from `sc_occupations`, which is required iff the network
/// has such attachments.
GeneratorSet build_generators(const NetworkSpec& spec,
                              const std::optional<RVector>& sc_occupations = std::nullopt);

struct StateRates {
  CMatrix dC;
  CMatrix dS;
  CVector dmu;
};

/// dC/dt = i[C, H] - {Gamma, C}/2 + f,
/// dS/dt = -i(H S + S H^*) - {Gamma, S}/2,
/// dmu/dt = (-i H - Gamma/2) mu.
StateRates cm_time_derivative(const ReducedState& state, const GeneratorSet& gen, const CMatrix& H);

/// W theta + theta W^H + F on the full interleaved covariance matrix.
CMatrix theta_time_derivative(const CMatrix& theta, const GeneratorSet& gen);

struct TrajectoryPoint {
  double time = 0.0;
  ReducedState state;
};
using Trajectory = std::vector<TrajectoryPoint>;

struct EvolveOptions {
  /// Record every n-th step (the initial and final states are always kept).
  std::size_t sample_every = 1;
  /// Cholesky-check the covariance matrix after every step.
  bool check_positivity = true;
};

/// Classic fourth-order Runge-Kutta integration with fixed step `dt`; the last
/// step is shortened to land exactly on t_final. Throws NumericError if the
/// covariance matrix stops being positive definite (dt too large).
Trajectory evolve(const ReducedState& initial, const GeneratorSet& gen, const CMatrix& H,
                  double t_final, double dt, const EvolveOptions& options = {});

enum class NessMethod {
  kBartelsStewart,  // Schur-based Lyapunov solve, O(L^3)
  kVectorized,      // dense L^2 x L^2 LU, O(L^6)
  kJacobi,          // fixed point on the dissipative diagonal
};

struct NessOptions {
  NessMethod method = NessMethod::kBartelsStewart;
  std::size_t jacobi_max_iterations = 200000;
};

/// Stationary covariances: C solves i[C, H] - {Gamma, C}/2 + f = 0 and S = 0,
/// mu = 0. Throws ModelError when the drift is not Hurwitz and NumericError
/// when the linear system is singular or the residual exceeds 1e-12 ||f||.
ReducedState solve_ness(const NetworkSpec& spec,
                        const std::optional<RVector>& sc_occupations = std::nullopt,
                        const NessOptions& options = {});

/// Frobenius norm of i[C, H] - {Gamma, C}/2 + f, evaluated with H shifted by its
/// mean frequency (the commutator is unchanged by the shift).
double ness_residual(const CMatrix& C, const GeneratorSet& gen, const CMatrix& H);

/// j_kl = 2 Im{H_kl <a_k^dag a_l>} for k != l; antisymmetric, zero diagonal.
/// Sum over l of j_kl is the rate of change of <a_k^dag a_k> due to H.
RMatrix energy_currents(const ReducedState& state, const CMatrix& H);

/// H minus its mean diagonal frequency times the identity.
CMatrix detuned(const CMatrix& H);

}  // namespace oscnet
