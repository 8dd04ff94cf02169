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

#include "oscnet/network.hpp"

#include <cmath>
#include <sstream>

#include "oscnet/errors.hpp"

namespace oscnet {

namespace {

constexpr double kHermitianTolerance = 1e-12;
constexpr double kMaxExponent = 700.0;

}  // namespace

std::string_view to_string(BathKind kind) {
  switch (kind) {
    case BathKind::kPhysical:
      return "physical";
    case BathKind::kSelfConsistent:
      return "self-consistent";
  }
  return "unknown";
}

bool NetworkSpec::has_self_consistent() const {
  for (const auto& bath : baths) {
    if (bath.kind == BathKind::kSelfConsistent) return true;
  }
  return false;
}

std::vector<std::size_t> NetworkSpec::attachment_counts() const {
  std::vector<std::size_t> counts(size(), 0);
  for (const auto& bath : baths) {
    if (bath.mode < counts.size()) ++counts[bath.mode];
  }
  return counts;
}

NetworkSpec build_chain(const ChainParams& p) {
  if (p.length < 2) throw ModelError("chain length must be at least 2");
  if (!(p.gamma > 0.0)) throw ModelError("chain boundary rate gamma must be positive");
  if (p.Gamma < 0.0) throw ModelError("self-consistent rate Gamma must be non-negative");
  if (p.n1 < 0.0 || p.nL < 0.0) throw ModelError("boundary occupations must be non-negative");

  const auto L = static_cast<Eigen::Index>(p.length);
  NetworkSpec spec;
  spec.hamiltonian = CMatrix::Zero(L, L);
  for (Eigen::Index k = 0; k < L; ++k) spec.hamiltonian(k, k) = p.omega;
  for (Eigen::Index k = 0; k + 1 < L; ++k) {
    spec.hamiltonian(k, k + 1) = Complex(0.0, p.lambda);
    spec.hamiltonian(k + 1, k) = Complex(0.0, -p.lambda);
  }

  spec.baths.push_back({0, p.gamma, p.n1, BathKind::kPhysical});
  spec.baths.push_back({p.length - 1, p.gamma, p.nL, BathKind::kPhysical});
  if (p.Gamma > 0.0) {
    for (std::size_t k = 0; k < p.length; ++k) {
      spec.baths.push_back({k, p.Gamma, 0.0, BathKind::kSelfConsistent});
    }
  }
  return spec;
}

std::optional<ChainParams> chain_params_of(const NetworkSpec& spec) {
  const std::size_t L = spec.size();
  if (L < 2) return std::nullopt;
  const CMatrix& H = spec.hamiltonian;

  ChainParams p;
  p.length = L;
  p.omega = H(0, 0).real();
  p.lambda = H(0, 1).imag();
  for (Eigen::Index k = 0; k < H.rows(); ++k) {
    for (Eigen::Index l = 0; l < H.cols(); ++l) {
      Complex expected = 0.0;
      if (k == l) expected = p.omega;
      if (l == k + 1) expected = Complex(0.0, p.lambda);
      if (k == l + 1) expected = Complex(0.0, -p.lambda);
      if (std::abs(H(k, l) - expected) > kHermitianTolerance) return std::nullopt;
    }
  }

  std::optional<BathAttachment> first, last;
  std::size_t sc_count = 0;
  std::optional<double> sc_rate;
  std::vector<bool> sc_seen(L, false);
  for (const auto& bath : spec.baths) {
    if (bath.kind == BathKind::kPhysical) {
      if (bath.mode == 0 && !first) {
        first = bath;
      } else if (bath.mode == L - 1 && !last) {
        last = bath;
      } else {
        return std::nullopt;
      }
    } else {
      if (bath.mode >= L || sc_seen[bath.mode]) return std::nullopt;
      if (sc_rate && *sc_rate != bath.rate) return std::nullopt;
      sc_rate = bath.rate;
      sc_seen[bath.mode] = true;
      ++sc_count;
    }
  }
  if (!first || !last || first->rate != last->rate) return std::nullopt;
  if (sc_count != 0 && sc_count != L) return std::nullopt;

  p.gamma = first->rate;
  p.n1 = first->occupation;
  p.nL = last->occupation;
  p.Gamma = sc_rate.value_or(0.0);
  return p;
}

double occupation_from_temperature(double omega, double temperature) {
  if (!(omega > 0.0)) throw ModelError("occupation_from_temperature: omega must be positive");
  if (!(temperature > 0.0)) {
    throw ModelError("occupation_from_temperature: temperature must be positive");
  }
  const double x = omega / temperature;
  if (x > kMaxExponent) return 0.0;
  return 1.0 / std::expm1(x);
}

std::vector<std::string> validate(const NetworkSpec& spec) {
  std::vector<std::string> violations;
  const CMatrix& H = spec.hamiltonian;
  if (H.rows() == 0 || H.rows() != H.cols()) {
    std::ostringstream os;
    os << "Hamiltonian must be a non-empty square matrix (got " << H.rows() << "x" << H.cols()
       << ")";
    violations.push_back(os.str());
    return violations;
  }
  for (Eigen::Index k = 0; k < H.rows(); ++k) {
    for (Eigen::Index l = k; l < H.cols(); ++l) {
      if (std::abs(H(l, k) - std::conj(H(k, l))) > kHermitianTolerance) {
        std::ostringstream os;
        os << "Hamiltonian is not Hermitian at (" << k + 1 << "," << l + 1 << "): H_kl = " << H(k, l)
           << ", H_lk = " << H(l, k);
        violations.push_back(os.str());
      }
    }
  }

  const std::size_t L = spec.size();
  std::vector<std::size_t> counts(L, 0);
  for (std::size_t i = 0; i < spec.baths.size(); ++i) {
    const auto& bath = spec.baths[i];
    std::ostringstream prefix;
    prefix << "bath #" << i + 1 << " (" << to_string(bath.kind) << "): ";
    if (bath.mode >= L) {
      violations.push_back(prefix.str() + "mode index " + std::to_string(bath.mode + 1) +
                           " outside [1, " + std::to_string(L) + "]");
      continue;
    }
    ++counts[bath.mode];
    if (!(bath.rate >= 0.0)) {
      violations.push_back(prefix.str() + "rate must be non-negative, got " +
                           std::to_string(bath.rate));
    }
    if (!(bath.occupation >= 0.0)) {
      violations.push_back(prefix.str() + "occupation must be non-negative, got " +
                           std::to_string(bath.occupation));
    }
  }
  for (std::size_t k = 0; k < L; ++k) {
    if (counts[k] > 2) {
      violations.push_back("mode " + std::to_string(k + 1) + " carries " +
                           std::to_string(counts[k]) + " baths (at most 2 allowed)");
    }
  }
  return violations;
}

void require_valid(const NetworkSpec& spec) {
  const auto violations = validate(spec);
  if (violations.empty()) return;
  std::string message = "invalid network:";
  for (const auto& v : violations) message += "\n  " + v;
  throw ModelError(message);
}

}  // namespace oscnet
