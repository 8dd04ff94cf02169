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

/// Stationary state of the boundary-driven chain with self-consistent baths.
/// Indices are 0-based; coherence_x is <a_k^dag a_{k+1}>, the same on every bond.
struct ChainNess {
  RVector occupations;
  double coherence_x = 0.0;
  double current_j = 0.0;
  double pi_total = 0.0;
  double pi_r = 0.0;
  double pi_sc = 0.0;
  RVector sc_occupations;
};

/// O(L) closed form. D = 4 lambda^2 + gamma^2 + gamma Gamma (L - 1),
/// x = gamma lambda (nL - n1) / D, j = 2 lambda x,
/// pi_total = j [1/(n1 + 1/2) - 1/(nL + 1/2)]; the split is filled in by
/// production_split.
ChainNess closed_form_ness(const ChainParams& params);

struct ProductionSplit {
  double pi_r = 0.0;
  double pi_sc = 0.0;
};

/// Production attributed to the two physical baths and to the self-consistent
/// ones, from the diagonal of (C + I/2)^{-1} for the tridiagonal C of `ness`.
/// Evaluated in a form that avoids subtracting O(gamma) terms, so relative
/// accuracy holds when the production is many orders below the rates.
ProductionSplit production_split(const ChainNess& ness, const ChainParams& params);

enum class SelfConsistentMethod {
  kDirect,     // superposition: one Schur factorization, L+1 Lyapunov solves, one L x L system
  kIterative,  // n_k <- C_kk fixed point, each step one Lyapunov solve
};

struct SelfConsistentOptions {
  SelfConsistentMethod method = SelfConsistentMethod::kDirect;
  std::size_t max_iterations = 200000;
  /// Iteration stops once max |change in n_k| <= tolerance * max(1, max n_k).
  double tolerance = 1e-14;
  /// Starting occupations for the iterative method (default: all zero).
  std::optional<RVector> initial_guess;
};

struct SelfConsistentSolution {
  ReducedState state;
  RVector sc_occupations;
  std::size_t iterations = 0;
  /// max_k |C_kk - n_k| over modes carrying a self-consistent bath.
  double self_consistency_residual = 0.0;
};

/// Stationary state of any network whose self-consistent baths take the
/// occupation of their own mode. The condition keeps the stationary equation
/// linear in C. Networks without such baths reduce to solve_ness.
SelfConsistentSolution solve_selfconsistent(const NetworkSpec& spec,
                                            const SelfConsistentOptions& options = {});

/// ChainNess of a network produced by build_chain (ModelError otherwise), read
/// off the numerical solution. pi_total is the flux into the two physical baths.
ChainNess solve_selfconsistent_ness(const NetworkSpec& spec,
                                    const SelfConsistentOptions& options = {});

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = slope x + intercept. Requires two distinct x.
LineFit fit_line(const RVector& x, const RVector& y);

struct SweepRow {
  std::size_t length = 0;
  double current_j = 0.0;
  double pi_total = 0.0;
  double pi_r = 0.0;
  double pi_sc = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Log-log fits over rows with L >= fit_min_length (the top decade).
  std::size_t fit_min_length = 0;
  std::optional<LineFit> fit_pi_r;
  std::optional<LineFit> fit_pi_sc;
  /// Smallest integer L in [2, max L] with pi_sc > pi_r.
  std::optional<std::size_t> crossover;
};

/// Closed-form rows for each length (params.length is ignored), computed
/// concurrently and returned in input order. Lengths must be ascending.
/// `threads` = 0 uses the hardware concurrency.
SweepResult scaling_sweep(const ChainParams& params, const std::vector<std::size_t>& lengths,
                          unsigned threads = 0);

/// First integer L in [2, max_length] where pi_sc > pi_r; nullopt if none.
std::optional<std::size_t> find_crossover(const ChainParams& params, std::size_t max_length);

/// Closed-form occupations <a_k^dag a_k>, k = 0 .. L-1.
RVector occupation_profile(const ChainParams& params);

}  // namespace oscnet
