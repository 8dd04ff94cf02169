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

#include "oscnet/chain.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <Eigen/LU>

#include "oscnet/dynamics.hpp"
#include "oscnet/entropy.hpp"
#include "oscnet/errors.hpp"
#include "oscnet/lyapunov.hpp"
#include "oscnet/tridiagonal.hpp"

namespace oscnet {

namespace {

constexpr double kMinReciprocalCondition = 1e-14;

void check_params(const ChainParams& p) {
  if (p.length < 2) throw ModelError("chain length must be at least 2");
  if (!(p.gamma > 0.0)) throw ModelError("chain boundary rate gamma must be positive");
  if (!(p.Gamma >= 0.0)) throw ModelError("self-consistent rate Gamma must be non-negative");
  if (!(p.n1 >= 0.0) || !(p.nL >= 0.0)) throw ModelError("boundary occupations must be non-negative");
}

double denominator(const ChainParams& p) {
  return 4.0 * p.lambda * p.lambda + p.gamma * p.gamma +
         p.gamma * p.Gamma * static_cast<double>(p.length - 1);
}

// Production of a physical boundary channel, gamma/(d - e) [(c - n)(c - n - e)/(n + 1/2) + e]
// with d = c + 1/2; algebraically Phi + gamma (n + 1/2)/(d - e) - gamma.
double boundary_production(double gamma, double n, double occupation, double shift) {
  const double excess = occupation - n;
  const double pivot = occupation + 0.5 - shift;
  return gamma / pivot * (excess * (excess - shift) / (n + 0.5) + shift);
}

}  // namespace

RVector occupation_profile(const ChainParams& p) {
  check_params(p);
  const auto L = static_cast<Eigen::Index>(p.length);
  const double D = denominator(p);
  const double mean = 0.5 * (p.n1 + p.nL);
  const double half_gap = 0.5 * (p.n1 - p.nL);
  RVector occ(L);
  for (Eigen::Index i = 0; i < L; ++i) {
    const double k = static_cast<double>(i + 1);
    double numerator = p.Gamma * p.gamma * (static_cast<double>(L) - 2.0 * k + 1.0);
    if (i == 0) numerator += p.gamma * p.gamma;
    if (i == L - 1) numerator -= p.gamma * p.gamma;
    occ(i) = mean + half_gap * numerator / D;
  }
  return occ;
}

ChainNess closed_form_ness(const ChainParams& p) {
  check_params(p);
  const double D = denominator(p);
  ChainNess ness;
  ness.occupations = occupation_profile(p);
  ness.sc_occupations = ness.occupations;
  ness.coherence_x = p.gamma * p.lambda * (p.nL - p.n1) / D;
  ness.current_j = 2.0 * p.lambda * ness.coherence_x;
  ness.pi_total = ness.current_j * (1.0 / (p.n1 + 0.5) - 1.0 / (p.nL + 0.5));
  const auto split = production_split(ness, p);
  ness.pi_r = split.pi_r;
  ness.pi_sc = split.pi_sc;
  return ness;
}

ProductionSplit production_split(const ChainNess& ness, const ChainParams& p) {
  check_params(p);
  const auto L = ness.occupations.size();
  if (L != static_cast<Eigen::Index>(p.length)) {
    throw ModelError("production_split: occupation vector does not match the chain length");
  }
  const RVector d = ness.occupations.array() + 0.5;
  const RVector e = RVector::Constant(L - 1, ness.coherence_x);
  const auto inv = tridiagonal_inverse_diagonal(d, e);

  ProductionSplit split;
  split.pi_r = boundary_production(p.gamma, p.n1, ness.occupations(0), inv.coupling_shift(0)) +
               boundary_production(p.gamma, p.nL, ness.occupations(L - 1), inv.coupling_shift(L - 1));
  if (p.Gamma > 0.0) {
    for (Eigen::Index k = 0; k < L; ++k) {
      split.pi_sc += p.Gamma * inv.coupling_shift(k) * inv.inverse_diagonal(k);
    }
  }
  return split;
}

SelfConsistentSolution solve_selfconsistent(const NetworkSpec& spec,
                                            const SelfConsistentOptions& options) {
  require_valid(spec);
  const auto L = static_cast<Eigen::Index>(spec.size());
  SelfConsistentSolution out;
  if (!spec.has_self_consistent()) {
    out.state = solve_ness(spec);
    out.sc_occupations = out.state.C.diagonal().real();
    return out;
  }

  RVector gamma_phys = RVector::Zero(L);
  RVector f_phys = RVector::Zero(L);
  RVector g_sc = RVector::Zero(L);
  for (const auto& bath : spec.baths) {
    const auto k = static_cast<Eigen::Index>(bath.mode);
    if (bath.kind == BathKind::kSelfConsistent) {
      g_sc(k) += bath.rate;
    } else {
      gamma_phys(k) += bath.rate;
      f_phys(k) += bath.rate * bath.occupation;
    }
  }

  CMatrix A = -kImag * detuned(spec.hamiltonian);
  A.diagonal() -= 0.5 * (gamma_phys + g_sc).cast<Complex>();
  const LyapunovSolver lyapunov(A);
  if (lyapunov.spectral_abscissa() >= 0.0) {
    throw ModelError("drift is not Hurwitz; every mode must be damped directly or through couplings");
  }
  const auto stationary_diag = [&](const RVector& source) {
    CMatrix rhs = CMatrix::Zero(L, L);
    rhs.diagonal() = -source.cast<Complex>();
    return RVector(lyapunov.solve(rhs).diagonal().real());
  };

  RVector n_sc;
  if (options.method == SelfConsistentMethod::kDirect) {
    // C(n) = C(f_phys) + sum_m n_m C(g_m e_m); impose n = diag C(n).
    const RVector base = stationary_diag(f_phys);
    RMatrix response = RMatrix::Zero(L, L);
    for (Eigen::Index m = 0; m < L; ++m) {
      if (g_sc(m) == 0.0) continue;
      RVector unit = RVector::Zero(L);
      unit(m) = g_sc(m);
      response.col(m) = stationary_diag(unit);
    }
    const RMatrix system = RMatrix::Identity(L, L) - response;
    Eigen::PartialPivLU<RMatrix> lu(system);
    if (!(lu.rcond() > kMinReciprocalCondition)) {
      throw NumericError("self-consistency system is singular (reciprocal condition " +
                         std::to_string(lu.rcond()) + ")");
    }
    n_sc = lu.solve(base);
    out.iterations = 1;
  } else {
    n_sc = options.initial_guess.value_or(RVector::Zero(L));
    if (n_sc.size() != L) throw ModelError("initial guess has the wrong length");
    bool converged = false;
    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
      const RVector next = stationary_diag(f_phys + g_sc.cwiseProduct(n_sc));
      const double change = (next - n_sc).cwiseAbs().maxCoeff();
      n_sc = next;
      out.iterations = it;
      if (change <= options.tolerance * std::max(1.0, n_sc.cwiseAbs().maxCoeff())) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw NumericError("self-consistent iteration did not converge in " +
                         std::to_string(options.max_iterations) + " steps");
    }
  }

  out.state = solve_ness(spec, n_sc);
  const RVector diag = out.state.C.diagonal().real();
  for (Eigen::Index k = 0; k < L; ++k) {
    if (g_sc(k) > 0.0) {
      out.self_consistency_residual =
          std::max(out.self_consistency_residual, std::abs(diag(k) - n_sc(k)));
    }
  }
  out.sc_occupations = n_sc;
  return out;
}

ChainNess solve_selfconsistent_ness(const NetworkSpec& spec, const SelfConsistentOptions& options) {
  const auto params = chain_params_of(spec);
  if (!params) throw ModelError("network is not a boundary-driven chain");
  const auto solution = solve_selfconsistent(spec, options);
  const ReducedState& state = solution.state;

  ChainNess ness;
  ness.occupations = state.C.diagonal().real();
  ness.sc_occupations = ness.occupations;
  ness.coherence_x = state.C(1, 0).real();
  ness.current_j = energy_currents(state, spec.hamiltonian)(0, 1);
  for (const auto& bath : spec.baths) {
    if (bath.kind == BathKind::kPhysical) {
      ness.pi_total += entropy_flux(state, {bath.mode, bath.rate, bath.occupation});
    }
  }
  const auto split = production_split(ness, *params);
  ness.pi_r = split.pi_r;
  ness.pi_sc = split.pi_sc;
  return ness;
}

LineFit fit_line(const RVector& x, const RVector& y) {
  const auto n = x.size();
  if (y.size() != n || n < 2) throw ModelError("fit_line needs at least two points");
  const double mx = x.mean();
  const double my = y.mean();
  const double sxx = (x.array() - mx).square().sum();
  if (!(sxx > 0.0)) throw ModelError("fit_line needs two distinct abscissae");
  const double sxy = ((x.array() - mx) * (y.array() - my)).sum();
  const double syy = (y.array() - my).square().sum();

  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.points = static_cast<std::size_t>(n);
  return fit;
}

std::optional<std::size_t> find_crossover(const ChainParams& params, std::size_t max_length) {
  if (!(params.Gamma > 0.0)) return std::nullopt;
  ChainParams p = params;
  for (std::size_t L = 2; L <= max_length; ++L) {
    p.length = L;
    const auto ness = closed_form_ness(p);
    if (ness.pi_sc > ness.pi_r) return L;
  }
  return std::nullopt;
}

SweepResult scaling_sweep(const ChainParams& params, const std::vector<std::size_t>& lengths,
                          unsigned threads) {
  if (lengths.empty()) throw ModelError("scaling_sweep needs at least one length");
  if (!std::is_sorted(lengths.begin(), lengths.end())) {
    throw ModelError("scaling_sweep lengths must be sorted ascending");
  }
  {
    ChainParams probe = params;
    probe.length = lengths.front();
    check_params(probe);
  }

  SweepResult result;
  result.rows.resize(lengths.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < lengths.size(); i = next++) {
      ChainParams p = params;
      p.length = lengths[i];
      const auto ness = closed_form_ness(p);
      result.rows[i] = {lengths[i], ness.current_j, ness.pi_total, ness.pi_r, ness.pi_sc};
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, lengths.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  const std::size_t max_length = lengths.back();
  result.fit_min_length = static_cast<std::size_t>(std::ceil(static_cast<double>(max_length) / 10.0));
  std::vector<double> log_l, log_r, log_sc;
  for (const auto& row : result.rows) {
    if (row.length < result.fit_min_length) continue;
    log_l.push_back(std::log(static_cast<double>(row.length)));
    log_r.push_back(row.pi_r > 0.0 ? std::log(row.pi_r) : std::nan(""));
    log_sc.push_back(row.pi_sc > 0.0 ? std::log(row.pi_sc) : std::nan(""));
  }
  const auto try_fit = [&](const std::vector<double>& ys) -> std::optional<LineFit> {
    if (log_l.size() < 2 || log_l.front() == log_l.back()) return std::nullopt;
    for (double y : ys) {
      if (!std::isfinite(y)) return std::nullopt;
    }
    return fit_line(Eigen::Map<const RVector>(log_l.data(), static_cast<Eigen::Index>(log_l.size())),
                    Eigen::Map<const RVector>(ys.data(), static_cast<Eigen::Index>(ys.size())));
  };
  result.fit_pi_r = try_fit(log_r);
  result.fit_pi_sc = try_fit(log_sc);
  result.crossover = find_crossover(params, max_length);
  return result;
}

}  // namespace oscnet
