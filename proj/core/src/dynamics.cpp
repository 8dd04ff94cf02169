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

#include "oscnet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oscnet/errors.hpp"
#include "oscnet/lyapunov.hpp"

namespace oscnet {

namespace {

constexpr double kResidualTolerance = 1e-12;
constexpr double kHurwitzSlack = 1e-13;

void require_shapes(const ReducedState& state, const GeneratorSet& gen, const CMatrix& H) {
  const auto L = state.C.rows();
  if (H.rows() != L || H.cols() != L || gen.gamma_diag.size() != L || gen.f_diag.size() != L ||
      state.S.rows() != L || state.mu.size() != L) {
    throw ModelError("cm_time_derivative: state, generators and Hamiltonian disagree in size");
  }
}

// Each rate is assembled as G + G^H (or K + K^T) so that Hermiticity of C and
// symmetry of S hold exactly in floating point along a trajectory.
StateRates rates(const ReducedState& state, const GeneratorSet& gen, const CMatrix& H) {
  const auto& gamma = gen.gamma_diag;
  CMatrix g = kImag * (state.C * H);
  g -= 0.5 * (gamma.asDiagonal() * state.C);
  g.diagonal() += 0.5 * gen.f_diag.cast<Complex>();

  CMatrix k = -kImag * (H * state.S);
  k -= 0.5 * (gamma.asDiagonal() * state.S);

  CVector dmu = -kImag * (H * state.mu);
  dmu -= 0.5 * gamma.cast<Complex>().cwiseProduct(state.mu);

  return {g + g.adjoint(), k + k.transpose(), std::move(dmu)};
}

ReducedState axpy(const ReducedState& base, double h, const StateRates& r) {
  return {base.C + h * r.dC, base.S + h * r.dS, base.mu + h * r.dmu};
}

void check_positive(const ReducedState& state, double t, double dt) {
  // a negative occupation already fails validation inside assemble_full_cm
  const bool valid = validate(state).empty();
  if (!valid || Eigen::LLT<CMatrix>(assemble_full_cm(state).theta).info() != Eigen::Success) {
    std::ostringstream os;
    os << "covariance matrix lost positive definiteness at t = " << t << " (dt = " << dt
       << "); reduce the time step";
    throw NumericError(os.str());
  }
}

CMatrix lyapunov_drift(const GeneratorSet& gen, const CMatrix& H_detuned) {
  CMatrix A = -kImag * H_detuned;
  A.diagonal() -= 0.5 * gen.gamma_diag.cast<Complex>();
  return A;
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

CMatrix detuned(const CMatrix& H) {
  const double mean = H.diagonal().real().mean();
  CMatrix out = H;
  out.diagonal().array() -= mean;
  return out;
}

GeneratorSet build_generators(const NetworkSpec& spec, const std::optional<RVector>& sc_occupations) {
  require_valid(spec);
  const auto L = static_cast<Eigen::Index>(spec.size());
  if (spec.has_self_consistent()) {
    if (!sc_occupations) {
      throw ModelError("network has self-consistent baths but no occupations were supplied for them");
    }
    if (sc_occupations->size() != L) {
      throw ModelError("self-consistent occupation vector has the wrong length");
    }
  }

  GeneratorSet gen;
  gen.gamma_diag = RVector::Zero(L);
  gen.f_diag = RVector::Zero(L);
  for (const auto& bath : spec.baths) {
    const auto k = static_cast<Eigen::Index>(bath.mode);
    const double n =
        bath.kind == BathKind::kSelfConsistent ? (*sc_occupations)(k) : bath.occupation;
    gen.gamma_diag(k) += bath.rate;
    gen.f_diag(k) += bath.rate * n;
  }

  const CMatrix& H = spec.hamiltonian;
  gen.drift = CMatrix::Zero(2 * L, 2 * L);
  gen.diffusion = RVector::Zero(2 * L);
  for (Eigen::Index k = 0; k < L; ++k) {
    for (Eigen::Index l = 0; l < L; ++l) {
      gen.drift(2 * k, 2 * l) = -kImag * H(k, l);
      gen.drift(2 * k + 1, 2 * l + 1) = kImag * std::conj(H(k, l));
    }
    gen.drift(2 * k, 2 * k) -= 0.5 * gen.gamma_diag(k);
    gen.drift(2 * k + 1, 2 * k + 1) -= 0.5 * gen.gamma_diag(k);
    gen.diffusion(2 * k) = gen.f_diag(k) + 0.5 * gen.gamma_diag(k);
    gen.diffusion(2 * k + 1) = gen.diffusion(2 * k);
  }
  return gen;
}

StateRates cm_time_derivative(const ReducedState& state, const GeneratorSet& gen, const CMatrix& H) {
  require_shapes(state, gen, H);
  return rates(state, gen, H);
}

CMatrix theta_time_derivative(const CMatrix& theta, const GeneratorSet& gen) {
  CMatrix out = gen.drift * theta + theta * gen.drift.adjoint();
  out.diagonal() += gen.diffusion.cast<Complex>();
  return out;
}

Trajectory evolve(const ReducedState& initial, const GeneratorSet& gen, const CMatrix& H,
                  double t_final, double dt, const EvolveOptions& options) {
  if (!(t_final > 0.0) || !(dt > 0.0)) throw ModelError("evolve: t_final and dt must be positive");
  require_valid(initial);
  require_shapes(initial, gen, H);
  const std::size_t every = std::max<std::size_t>(1, options.sample_every);

  const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
  Trajectory trajectory;
  trajectory.reserve(steps / every + 2);
  trajectory.push_back({0.0, initial});

  ReducedState state = initial;
  double t = 0.0;
  for (std::size_t n = 1; n <= steps; ++n) {
    const double h = (n == steps) ? t_final - t : dt;
    const StateRates k1 = rates(state, gen, H);
    const StateRates k2 = rates(axpy(state, 0.5 * h, k1), gen, H);
    const StateRates k3 = rates(axpy(state, 0.5 * h, k2), gen, H);
    const StateRates k4 = rates(axpy(state, h, k3), gen, H);
    state.C += (h / 6.0) * (k1.dC + 2.0 * k2.dC + 2.0 * k3.dC + k4.dC);
    state.S += (h / 6.0) * (k1.dS + 2.0 * k2.dS + 2.0 * k3.dS + k4.dS);
    state.mu += (h / 6.0) * (k1.dmu + 2.0 * k2.dmu + 2.0 * k3.dmu + k4.dmu);
    t = (n == steps) ? t_final : static_cast<double>(n) * dt;

    if (options.check_positivity) check_positive(state, t, dt);
    if (n % every == 0 || n == steps) trajectory.push_back({t, state});
  }
  return trajectory;
}

double ness_residual(const CMatrix& C, const GeneratorSet& gen, const CMatrix& H) {
  const CMatrix A = lyapunov_drift(gen, detuned(H));
  CMatrix r = A * C + C * A.adjoint();
  r.diagonal() += gen.f_diag.cast<Complex>();
  return r.norm();
}

ReducedState solve_ness(const NetworkSpec& spec, const std::optional<RVector>& sc_occupations,
                        const NessOptions& options) {
  const GeneratorSet gen = build_generators(spec, sc_occupations);
  const auto L = static_cast<Eigen::Index>(spec.size());
  const CMatrix H = detuned(spec.hamiltonian);
  const CMatrix A = lyapunov_drift(gen, H);
  CMatrix rhs = CMatrix::Zero(L, L);
  rhs.diagonal() = -gen.f_diag.cast<Complex>();

  const LyapunovSolver lyapunov(A);
  const double scale = std::max(A.cwiseAbs().maxCoeff(), 1e-300);
  if (lyapunov.spectral_abscissa() > -kHurwitzSlack * scale) {
    std::ostringstream os;
    os << "drift is not Hurwitz (spectral abscissa " << lyapunov.spectral_abscissa()
       << "); every mode must be damped directly or through couplings";
    throw ModelError(os.str());
  }

  const double f_norm = gen.f_diag.norm();
  const double target = kResidualTolerance * std::max(f_norm, 1e-300);
  CMatrix C;
  switch (options.method) {
    case NessMethod::kBartelsStewart: {
      C = hermitian_part(lyapunov.solve(rhs));
      if (ness_residual(C, gen, H) > target) {
        CMatrix r = A * C + C * A.adjoint() - rhs;
        C = hermitian_part(C + lyapunov.solve(-r));
      }
      break;
    }
    case NessMethod::kVectorized: {
      const CMatrix op = vectorized_lyapunov_operator(A);
      C = hermitian_part(solve_vectorized(op, rhs));
      if (ness_residual(C, gen, H) > target) {
        CMatrix r = A * C + C * A.adjoint() - rhs;
        C = hermitian_part(C + solve_vectorized(op, -r));
      }
      break;
    }
    case NessMethod::kJacobi: {
      CMatrix denom(L, L);
      for (Eigen::Index i = 0; i < L; ++i) {
        for (Eigen::Index j = 0; j < L; ++j) denom(i, j) = A(i, i) + std::conj(A(j, j));
      }
      if (denom.cwiseAbs().minCoeff() == 0.0) {
        throw ModelError("Jacobi NESS iteration needs every mode to be damped directly");
      }
      C = CMatrix::Zero(L, L);
      std::size_t iter = 0;
      for (; iter < options.jacobi_max_iterations; ++iter) {
        const CMatrix r = A * C + C * A.adjoint() - rhs;
        if (r.norm() <= target) break;
        C = hermitian_part(C - r.cwiseQuotient(denom));
      }
      if (iter == options.jacobi_max_iterations) {
        throw NumericError("Jacobi NESS iteration did not converge; use the direct solver");
      }
      break;
    }
  }

  const double residual = ness_residual(C, gen, H);
  if (!(residual <= target)) {
    std::ostringstream os;
    os << "NESS solve is ill-conditioned: residual " << residual << " exceeds " << target
       << " (smallest operator eigenvalue magnitude " << lyapunov.min_separation() << ")";
    throw NumericError(os.str());
  }
  return {std::move(C), CMatrix::Zero(L, L), CVector::Zero(L)};
}

RMatrix energy_currents(const ReducedState& state, const CMatrix& H) {
  const auto L = static_cast<Eigen::Index>(state.size());
  RMatrix j = RMatrix::Zero(L, L);
  for (Eigen::Index k = 0; k < L; ++k) {
    for (Eigen::Index l = k + 1; l < L; ++l) {
      const double value =
          2.0 * (H(k, l) * state.second_moment(static_cast<std::size_t>(k), static_cast<std::size_t>(l)))
                    .imag();
      j(k, l) = value;
      j(l, k) = -value;
    }
  }
  return j;
}

}  // namespace oscnet
