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
#include <string>
#include <string_view>
#include <vector>

#include "oscnet/types.hpp"

namespace oscnet {

enum class BathKind { kPhysical, kSelfConsistent };

std::string_view to_string(BathKind kind);

/// A local thermal bath acting on one mode. Rates and frequencies are in the
/// same angular-frequency units as the Hamiltonian (hbar = k_B = 1).
///
/// For self-consistent attachments `occupation` is ignored; the value is fixed
/// at solve time so that the bath exchanges no net energy with its mode.
struct BathAttachment {
  std::size_t mode = 0;  // 0-based
  double rate = 0.0;
  double occupation = 0.0;
  BathKind kind = BathKind::kPhysical;
};

/// Open network of linearly coupled bosonic modes: H_{kk} is the frequency of
/// mode k and H_{kl} (k != l) the hopping amplitude of a_k^dag a_l.
struct NetworkSpec {
  CMatrix hamiltonian;
  std::vector<BathAttachment> baths;

  std::size_t size() const { return static_cast<std::size_t>(hamiltonian.rows()); }
  bool has_self_consistent() const;
  /// Number of baths attached to each mode.
  std::vector<std::size_t> attachment_counts() const;
};

/// Boundary-driven nearest-neighbour chain. Physical baths (gamma, n1) and
/// (gamma, nL) sit on the end modes; a positive `Gamma` adds one
/// self-consistent bath of that rate on every mode.
struct ChainParams {
  std::size_t length = 2;
  double omega = 1.0;
  double lambda = 0.0;
  double gamma = 0.0;
  double n1 = 0.0;
  double nL = 0.0;
  double Gamma = 0.0;
};

/// H_{kk} = omega, H_{k,k+1} = i lambda, H_{k+1,k} = -i lambda.
/// Throws ModelError for length < 2, gamma <= 0 or negative rates/occupations.
NetworkSpec build_chain(const ChainParams& params);

/// Recovers the parameters of a network produced by build_chain; nullopt if the
/// network does not have that structure.
std::optional<ChainParams> chain_params_of(const NetworkSpec& spec);

/// Bose-Einstein occupation 1/(exp(omega/T) - 1). Returns 0 once omega/T
/// exceeds 700 (exp would overflow).
double occupation_from_temperature(double omega, double temperature);

/// Human-readable violations of the NetworkSpec invariants; empty iff valid.
std::vector<std::string> validate(const NetworkSpec& spec);

/// Throws ModelError listing all violations reported by validate().
void require_valid(const NetworkSpec& spec);

}  // namespace oscnet
