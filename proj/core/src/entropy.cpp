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

#include "oscnet/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oscnet/dynamics.hpp"
#include "oscnet/errors.hpp"

namespace oscnet {

namespace {

constexpr double kProductionFloor = 1e-12;
constexpr std::size_t kMinSamples = 1000;

void check_channel(const ReducedState& state, const ChannelRef& channel) {
  if (channel.mode >= state.size()) {
    throw ModelError("channel mode " + std::to_string(channel.mode + 1) + " outside [1, " +
                     std::to_string(state.size()) + "]");
  }
  if (!(channel.rate >= 0.0) || !(channel.occupation >= 0.0)) {
    throw ModelError("channel rate and occupation must be non-negative");
  }
}

double clamp_production(double value, double rate) {
  if (value >= 0.0) return value;
  if (value >= -kProductionFloor * std::max(1.0, rate)) return 0.0;
  std::ostringstream os;
  os << "entropy production " << value << " is negative beyond round-off; the state is invalid";
  throw NumericError(os.str());
}

}  // namespace

double entropy_flux(const ReducedState& state, const ChannelRef& channel) {
  check_channel(state, channel);
  return channel.rate * (state.occupation(channel.mode) - channel.occupation) /
         (channel.occupation + 0.5);
}

double entropy_production_channel(const ReducedState& state, const ChannelRef& channel,
                                  const CMatrix& theta_inverse) {
  check_channel(state, channel);
  const auto row = 2 * static_cast<Eigen::Index>(channel.mode);
  const double s = channel.occupation + 0.5;
  const double value =
      entropy_flux(state, channel) - channel.rate + channel.rate * s * theta_inverse(row, row).real();
  return clamp_production(value, channel.rate);
}

double entropy_production_channel(const ReducedState& state, const ChannelRef& channel) {
  return entropy_production_channel(state, channel, inverse_full_cm(state).theta);
}

RVector single_bath_occupations(const NetworkSpec& spec) {
  require_valid(spec);
  const auto counts = spec.attachment_counts();
  RVector n = RVector::Zero(static_cast<Eigen::Index>(spec.size()));
  for (const auto& bath : spec.baths) {
    if (bath.kind == BathKind::kSelfConsistent || counts[bath.mode] != 1) {
      throw ModelError(
          "NESS production forms need exactly one physical bath per mode; mode " +
          std::to_string(bath.mode + 1) + " is ambiguous");
    }
    n(static_cast<Eigen::Index>(bath.mode)) = bath.occupation;
  }
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) {
      throw ModelError("NESS production forms need a bath on every mode; mode " +
                       std::to_string(k + 1) + " has none");
    }
  }
  return n;
}

double ness_production_bilinear(const ReducedState& state, const CMatrix& H,
                                const RVector& reference_occupations) {
  const auto L = static_cast<Eigen::Index>(state.size());
  if (H.rows() != L || reference_occupations.size() != L) {
    throw ModelError("ness_production_bilinear: dimension mismatch");
  }
  double total = 0.0;
  for (Eigen::Index k = 0; k < L; ++k) {
    const double weight = 2.0 / (reference_occupations(k) + 0.5);
    for (Eigen::Index l = 0; l < L; ++l) {
      if (l == k) continue;
      total += weight * (H(k, l) * state.second_moment(static_cast<std::size_t>(k),
                                                       static_cast<std::size_t>(l)))
                            .imag();
    }
  }
  return total;
}

double ness_production_bilinear(const ReducedState& state, const NetworkSpec& spec) {
  return ness_production_bilinear(state, spec.hamiltonian, single_bath_occupations(spec));
}

double ness_production_onsager(const RMatrix& currents, const RVector& reference_occupations) {
  const auto L = currents.rows();
  if (currents.cols() != L || reference_occupations.size() != L) {
    throw ModelError("ness_production_onsager: dimension mismatch");
  }
  double total = 0.0;
  for (Eigen::Index k = 0; k < L; ++k) {
    for (Eigen::Index l = 0; l < L; ++l) {
      if (l == k) continue;
      total += currents(k, l) *
               (1.0 / (reference_occupations(k) + 0.5) - 1.0 / (reference_occupations(l) + 0.5));
    }
  }
  return 0.5 * total;
}

Complex irreversible_velocity(const GaussianWigner& wigner, const ChannelRef& channel,
                              const CVector& alpha) {
  const auto k = static_cast<Eigen::Index>(channel.mode);
  return 0.5 * channel.rate *
         (alpha(k) + (channel.occupation + 0.5) * wigner.dlog_dconj(alpha, channel.mode));
}

PhaseSpaceCurrents phase_space_currents(const ReducedState& state, const ChannelRef& channel,
                                        const CMatrix& H, const CVector& alpha) {
  check_channel(state, channel);
  if (alpha.size() != static_cast<Eigen::Index>(state.size()) || H.rows() != alpha.size()) {
    throw ModelError("phase_space_currents: dimension mismatch");
  }
  const GaussianWigner wigner(state);
  const double w = wigner.density(alpha);
  const auto k = static_cast<Eigen::Index>(channel.mode);
  return {irreversible_velocity(wigner, channel, alpha) * w,
          kImag * (H.row(k) * alpha).value() * w};
}

MonteCarloEstimate mc_production_estimate(const ReducedState& state, const ChannelRef& channel,
                                          std::size_t samples, std::mt19937_64& rng) {
  check_channel(state, channel);
  if (samples < kMinSamples) throw ModelError("mc_production_estimate needs at least 1000 samples");
  if (!(channel.rate > 0.0)) throw ModelError("mc_production_estimate needs a positive rate");

  const GaussianWigner wigner(state);
  const WignerSampler sampler(state);
  const double prefactor = 4.0 / (channel.rate * (channel.occupation + 0.5));

  // Welford accumulation of the per-sample integrand.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const CVector alpha = sampler.draw(rng);
    const double x = prefactor * std::norm(irreversible_velocity(wigner, channel, alpha));
    const double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }
  const double n = static_cast<double>(samples);
  return {mean, std::sqrt(m2 / (n - 1.0) / n)};
}

std::vector<ChannelEntry> channels_of(const NetworkSpec& spec,
                                      const std::optional<RVector>& sc_occupations) {
  require_valid(spec);
  if (spec.has_self_consistent() &&
      (!sc_occupations || sc_occupations->size() != static_cast<Eigen::Index>(spec.size()))) {
    throw ModelError("self-consistent baths need their solved occupations");
  }
  std::vector<ChannelEntry> out;
  out.reserve(spec.baths.size());
  for (const auto& bath : spec.baths) {
    ChannelEntry entry;
    entry.kind = bath.kind;
    entry.channel.mode = bath.mode;
    entry.channel.rate = bath.rate;
    entry.channel.occupation = bath.kind == BathKind::kSelfConsistent
                                   ? (*sc_occupations)(static_cast<Eigen::Index>(bath.mode))
                                   : bath.occupation;
    out.push_back(entry);
  }
  return out;
}

EntropyReport entropy_report(const ReducedState& state, const NetworkSpec& spec,
                             const std::optional<RVector>& sc_occupations) {
  if (state.size() != spec.size()) throw ModelError("entropy_report: state and network sizes differ");
  EntropyReport report;
  report.channels = channels_of(spec, sc_occupations);
  const CMatrix inverse = inverse_full_cm(state).theta;
  const auto n = static_cast<Eigen::Index>(report.channels.size());
  report.flux_per_channel = RVector::Zero(n);
  report.production_per_channel = RVector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& entry = report.channels[static_cast<std::size_t>(i)];
    entry.flux = entropy_flux(state, entry.channel);
    entry.production = entropy_production_channel(state, entry.channel, inverse);
    report.flux_per_channel(i) = entry.flux;
    report.production_per_channel(i) = entry.production;
  }
  report.total_flux = report.flux_per_channel.sum();
  report.total_production = report.production_per_channel.sum();
  report.currents = energy_currents(state, spec.hamiltonian);
  report.wigner_entropy = wigner_entropy(state);
  return report;
}

}  // namespace oscnet
