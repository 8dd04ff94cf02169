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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oscnet/gaussian_state.hpp"
#include "oscnet/network.hpp"
#include "oscnet/types.hpp"

namespace oscnet {

/// Density matrix on the product of per-mode Fock spaces truncated at n_max
/// quanta. Basis index = sum_k n_k (n_max+1)^(L-1-k), mode 0 most significant.
struct TruncatedState {
  std::size_t modes = 0;
  std::size_t n_max = 0;
  CMatrix rho;

  std::size_t dimension() const { return static_cast<std::size_t>(rho.rows()); }
};

/// Largest Hilbert-space dimension accepted by the Fock routines.
inline constexpr std::size_t kMaxFockDimension = 10000;

TruncatedState fock_vacuum(std::size_t modes, std::size_t n_max);
/// Product of thermal states, each renormalized on the truncated space.
TruncatedState fock_thermal(const RVector& occupations, std::size_t n_max);
/// Product of coherent states |alpha_k>, each renormalized on the truncated space.
TruncatedState fock_coherent(const CVector& alpha, std::size_t n_max);
/// Pure product state |n_1, ..., n_L>.
TruncatedState fock_basis_state(const std::vector<std::size_t>& levels, std::size_t n_max);

/// Operator of the form (O X)_i = weight_i X_{i + shift}; weights vanish
/// wherever i + shift leaves the space. Every ladder-operator product on the
/// truncated product space has this form, which keeps the generator free of
/// general sparse products.
struct ShiftOperator {
  Eigen::Index shift = 0;
  RVector weight;

  CMatrix dense() const;
};

/// The product a * b.
ShiftOperator compose(const ShiftOperator& a, const ShiftOperator& b);

/// Truncated a_k on the product space of `modes` modes.
ShiftOperator annihilation_operator(std::size_t modes, std::size_t n_max, std::size_t k);
/// Truncated a_k^dag.
ShiftOperator creation_operator(std::size_t modes, std::size_t n_max, std::size_t k);

/// The Liouvillian of the local master equation
/// d rho/dt = -i[H, rho] + sum over baths of
///   gamma (n + 1) D[a_k] rho + gamma n D[a_k^dag] rho,
/// with D[J] rho = J rho J^dag - {J^dag J, rho}/2, on the truncated space.
class FockModel {
 public:
  FockModel(const NetworkSpec& spec, std::size_t n_max,
            const std::optional<RVector>& sc_occupations = std::nullopt);

  std::size_t modes() const { return modes_; }
  std::size_t n_max() const { return n_max_; }
  std::size_t dimension() const { return dimension_; }

  CMatrix apply(const CMatrix& rho) const;

 private:
  struct Term {
    Complex coefficient;
    ShiftOperator op;
  };
  struct Jump {
    double coefficient;
    ShiftOperator op;
  };

  std::size_t modes_;
  std::size_t n_max_;
  std::size_t dimension_;
  // K = H - (i/2) sum c J^dag J split into its diagonal and off-diagonal parts.
  CVector effective_diagonal_;
  std::vector<Term> effective_offdiagonal_;
  std::vector<Jump> jumps_;
};

/// d rho / dt for the given state. Throws ModelError when the dimension exceeds
/// kMaxFockDimension or the state does not match the network.
CMatrix apply_generator(const TruncatedState& state, const NetworkSpec& spec,
                        const std::optional<RVector>& sc_occupations = std::nullopt);

struct FockEvolveOptions {
  /// Largest population allowed in the top Fock level of any mode.
  double tail_tolerance = 1e-8;
  /// Called with (t, state) at t = 0, every `observe_every` steps and at t_final.
  std::function<void(double, const TruncatedState&)> observer;
  std::size_t observe_every = 1;
  std::optional<RVector> sc_occupations;
};

/// Fourth-order Runge-Kutta integration with fixed step dt, last step
/// shortened to land on t_final. Throws NumericError when the truncation tail
/// exceeds the tolerance (advice: increase n_max).
TruncatedState evolve_fock(const TruncatedState& initial, const NetworkSpec& spec, double t_final,
                           double dt, const FockEvolveOptions& options = {});

/// Means and reduced covariances: C_ij = tr(a_j^dag a_i rho) - conj(mu_j) mu_i,
/// S_ij = tr(a_i a_j rho) - mu_i mu_j, mu_k = tr(a_k rho).
ReducedState extract_covariances(const TruncatedState& state);

/// Population of the level n_max of each mode.
RVector top_level_populations(const TruncatedState& state);

/// Violations of unit trace (1e-9), Hermiticity (1e-10) and positivity
/// (eigenvalues >= -1e-9); empty iff valid.
std::vector<std::string> validate(const TruncatedState& state);

/// Smallest n_max whose thermal tail sum_{m > n_max} n^m/(n+1)^(m+1) is below
/// `tail` for occupation n.
std::size_t recommended_cutoff(double occupation, double tail = 1e-9);

}  // namespace oscnet
