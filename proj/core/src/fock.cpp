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

#include "oscnet/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "oscnet/errors.hpp"

namespace oscnet {

namespace {

std::size_t checked_dimension(std::size_t modes, std::size_t n_max) {
  if (modes == 0 || n_max == 0) throw ModelError("Fock space needs at least one mode and n_max >= 1");
  std::size_t dim = 1;
  for (std::size_t k = 0; k < modes; ++k) {
    dim *= n_max + 1;
    if (dim > kMaxFockDimension) {
      std::ostringstream os;
      os << "Fock space (n_max + 1)^L exceeds " << kMaxFockDimension << " for L = " << modes
         << ", n_max = " << n_max;
      throw ModelError(os.str());
    }
  }
  return dim;
}

std::size_t stride_of(std::size_t modes, std::size_t n_max, std::size_t k) {
  std::size_t stride = 1;
  for (std::size_t m = k + 1; m < modes; ++m) stride *= n_max + 1;
  return stride;
}

std::size_t level_of(std::size_t index, std::size_t stride, std::size_t n_max) {
  return (index / stride) % (n_max + 1);
}

std::vector<std::size_t> levels_of_mode(std::size_t modes, std::size_t n_max, std::size_t k) {
  const std::size_t dim = checked_dimension(modes, n_max);
  const std::size_t stride = stride_of(modes, n_max, k);
  std::vector<std::size_t> levels(dim);
  for (std::size_t i = 0; i < dim; ++i) levels[i] = level_of(i, stride, n_max);
  return levels;
}

struct Span {
  Eigen::Index lo;      // first output index
  Eigen::Index length;  // number of output indices
  Eigen::Index source;  // first input index
};

Span span_of(const ShiftOperator& op) {
  const Eigen::Index dim = op.weight.size();
  const Eigen::Index s = op.shift;
  const Eigen::Index lo = std::max<Eigen::Index>(0, -s);
  return {lo, std::max<Eigen::Index>(0, dim - std::abs(s)), lo + s};
}

// out += c * op * x
void add_left(CMatrix& out, Complex c, const ShiftOperator& op, const CMatrix& x) {
  const Span sp = span_of(op);
  if (sp.length == 0) return;
  out.middleRows(sp.lo, sp.length).noalias() +=
      c * (op.weight.segment(sp.lo, sp.length).asDiagonal() * x.middleRows(sp.source, sp.length));
}

// out += c * x * op^dag
void add_right_adjoint(CMatrix& out, Complex c, const ShiftOperator& op, const CMatrix& x) {
  const Span sp = span_of(op);
  if (sp.length == 0) return;
  out.middleCols(sp.lo, sp.length).noalias() +=
      c * (x.middleCols(sp.source, sp.length) * op.weight.segment(sp.lo, sp.length).asDiagonal());
}

// out += c * op * x * op^dag
void add_sandwich(CMatrix& out, double c, const ShiftOperator& op, const CMatrix& x) {
  const Span sp = span_of(op);
  if (sp.length == 0) return;
  const auto w = op.weight.segment(sp.lo, sp.length);
  out.block(sp.lo, sp.lo, sp.length, sp.length).noalias() +=
      c * (w.asDiagonal() * x.block(sp.source, sp.source, sp.length, sp.length) * w.asDiagonal());
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

TruncatedState product_state(const std::vector<CMatrix>& factors, std::size_t n_max) {
  checked_dimension(factors.size(), n_max);
  CMatrix rho = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) rho = kron(rho, factors[k]);
  return {factors.size(), n_max, std::move(rho)};
}

// tr(op * rho)
Complex expectation(const ShiftOperator& op, const CMatrix& rho) {
  const Span sp = span_of(op);
  Complex sum = 0.0;
  for (Eigen::Index i = 0; i < sp.length; ++i) {
    sum += op.weight(sp.lo + i) * rho(sp.source + i, sp.lo + i);
  }
  return sum;
}

void check_state(const TruncatedState& state, const FockModel& model) {
  if (state.modes != model.modes() || state.n_max != model.n_max() ||
      state.dimension() != model.dimension() || state.rho.cols() != state.rho.rows()) {
    throw ModelError("Fock state does not match the network dimension");
  }
}

}  // namespace

TruncatedState fock_vacuum(std::size_t modes, std::size_t n_max) {
  const std::size_t dim = checked_dimension(modes, n_max);
  CMatrix rho = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  rho(0, 0) = 1.0;
  return {modes, n_max, std::move(rho)};
}

TruncatedState fock_thermal(const RVector& occupations, std::size_t n_max) {
  std::vector<CMatrix> factors;
  const auto levels = static_cast<Eigen::Index>(n_max + 1);
  for (Eigen::Index k = 0; k < occupations.size(); ++k) {
    const double n = occupations(k);
    if (!(n >= 0.0)) throw ModelError("thermal occupations must be non-negative");
    const double ratio = n / (n + 1.0);
    RVector p(levels);
    p(0) = 1.0;
    for (Eigen::Index m = 1; m < levels; ++m) p(m) = p(m - 1) * ratio;
    p /= p.sum();
    factors.push_back(p.cast<Complex>().asDiagonal().toDenseMatrix());
  }
  if (factors.empty()) throw ModelError("Fock state needs at least one mode");
  return product_state(factors, n_max);
}

TruncatedState fock_coherent(const CVector& alpha, std::size_t n_max) {
  std::vector<CMatrix> factors;
  const auto levels = static_cast<Eigen::Index>(n_max + 1);
  for (Eigen::Index k = 0; k < alpha.size(); ++k) {
    CVector psi(levels);
    psi(0) = 1.0;
    for (Eigen::Index m = 1; m < levels; ++m) {
      psi(m) = psi(m - 1) * alpha(k) / std::sqrt(static_cast<double>(m));
    }
    psi.normalize();
    factors.push_back(psi * psi.adjoint());
  }
  if (factors.empty()) throw ModelError("Fock state needs at least one mode");
  return product_state(factors, n_max);
}

TruncatedState fock_basis_state(const std::vector<std::size_t>& levels, std::size_t n_max) {
  const std::size_t dim = checked_dimension(levels.size(), n_max);
  std::size_t index = 0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (levels[k] > n_max) throw ModelError("basis level exceeds the Fock cutoff");
    index += levels[k] * stride_of(levels.size(), n_max, k);
  }
  CMatrix rho = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  rho(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return {levels.size(), n_max, std::move(rho)};
}

CMatrix ShiftOperator::dense() const {
  const Eigen::Index dim = weight.size();
  CMatrix out = CMatrix::Zero(dim, dim);
  const Span sp = span_of(*this);
  for (Eigen::Index i = 0; i < sp.length; ++i) out(sp.lo + i, sp.source + i) = weight(sp.lo + i);
  return out;
}

ShiftOperator compose(const ShiftOperator& a, const ShiftOperator& b) {
  const Eigen::Index dim = a.weight.size();
  if (b.weight.size() != dim) throw ModelError("compose: operator dimensions differ");
  ShiftOperator out{a.shift + b.shift, RVector::Zero(dim)};
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Eigen::Index mid = i + a.shift;
    const Eigen::Index end = mid + b.shift;
    if (mid < 0 || mid >= dim || end < 0 || end >= dim) continue;
    out.weight(i) = a.weight(i) * b.weight(mid);
  }
  return out;
}

ShiftOperator annihilation_operator(std::size_t modes, std::size_t n_max, std::size_t k) {
  if (k >= modes) throw ModelError("annihilation_operator: mode out of range");
  const auto levels = levels_of_mode(modes, n_max, k);
  const auto dim = static_cast<Eigen::Index>(levels.size());
  ShiftOperator op{static_cast<Eigen::Index>(stride_of(modes, n_max, k)), RVector::Zero(dim)};
  for (Eigen::Index i = 0; i < dim; ++i) {
    const std::size_t n = levels[static_cast<std::size_t>(i)];
    if (n < n_max) op.weight(i) = std::sqrt(static_cast<double>(n + 1));
  }
  return op;
}

ShiftOperator creation_operator(std::size_t modes, std::size_t n_max, std::size_t k) {
  if (k >= modes) throw ModelError("creation_operator: mode out of range");
  const auto levels = levels_of_mode(modes, n_max, k);
  const auto dim = static_cast<Eigen::Index>(levels.size());
  ShiftOperator op{-static_cast<Eigen::Index>(stride_of(modes, n_max, k)), RVector::Zero(dim)};
  for (Eigen::Index i = 0; i < dim; ++i) {
    const std::size_t n = levels[static_cast<std::size_t>(i)];
    if (n > 0) op.weight(i) = std::sqrt(static_cast<double>(n));
  }
  return op;
}

FockModel::FockModel(const NetworkSpec& spec, std::size_t n_max,
                     const std::optional<RVector>& sc_occupations)
    : modes_(spec.size()), n_max_(n_max), dimension_(checked_dimension(spec.size(), n_max)) {
  require_valid(spec);
  if (spec.has_self_consistent() &&
      (!sc_occupations || sc_occupations->size() != static_cast<Eigen::Index>(modes_))) {
    throw ModelError("self-consistent baths need their occupations in the Fock model");
  }
  const auto dim = static_cast<Eigen::Index>(dimension_);
  std::vector<std::vector<std::size_t>> levels;
  for (std::size_t k = 0; k < modes_; ++k) levels.push_back(levels_of_mode(modes_, n_max, k));

  effective_diagonal_ = CVector::Zero(dim);
  for (std::size_t k = 0; k < modes_; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const Complex frequency = spec.hamiltonian(kk, kk);
    for (Eigen::Index i = 0; i < dim; ++i) {
      effective_diagonal_(i) += frequency * static_cast<double>(levels[k][static_cast<std::size_t>(i)]);
    }
    for (std::size_t l = 0; l < modes_; ++l) {
      const Complex coupling = spec.hamiltonian(kk, static_cast<Eigen::Index>(l));
      if (l == k || coupling == 0.0) continue;
      effective_offdiagonal_.push_back(
          {coupling, compose(creation_operator(modes_, n_max, k), annihilation_operator(modes_, n_max, l))});
    }
  }

  for (const auto& bath : spec.baths) {
    const double n = bath.kind == BathKind::kSelfConsistent
                         ? (*sc_occupations)(static_cast<Eigen::Index>(bath.mode))
                         : bath.occupation;
    const double loss = bath.rate * (n + 1.0);
    const double gain = bath.rate * n;
    const auto& level = levels[bath.mode];
    if (loss > 0.0) jumps_.push_back({loss, annihilation_operator(modes_, n_max, bath.mode)});
    if (gain > 0.0) jumps_.push_back({gain, creation_operator(modes_, n_max, bath.mode)});
    // a^dag a = N and, truncated, a a^dag = N + 1 below the top level and 0 on it.
    for (Eigen::Index i = 0; i < dim; ++i) {
      const std::size_t m = level[static_cast<std::size_t>(i)];
      const double decay = loss * static_cast<double>(m) +
                           (m < n_max ? gain * static_cast<double>(m + 1) : 0.0);
      effective_diagonal_(i) -= Complex(0.0, 0.5 * decay);
    }
  }
}

CMatrix FockModel::apply(const CMatrix& rho) const {
  // -i (K rho - rho K^dag) + sum c J rho J^dag
  CMatrix out = -kImag * (effective_diagonal_.asDiagonal() * rho -
                          rho * effective_diagonal_.conjugate().asDiagonal());
  for (const auto& term : effective_offdiagonal_) {
    add_left(out, -kImag * term.coefficient, term.op, rho);
    add_right_adjoint(out, kImag * std::conj(term.coefficient), term.op, rho);
  }
  for (const auto& jump : jumps_) add_sandwich(out, jump.coefficient, jump.op, rho);
  return out;
}

CMatrix apply_generator(const TruncatedState& state, const NetworkSpec& spec,
                        const std::optional<RVector>& sc_occupations) {
  const FockModel model(spec, state.n_max, sc_occupations);
  check_state(state, model);
  return model.apply(state.rho);
}

RVector top_level_populations(const TruncatedState& state) {
  RVector top = RVector::Zero(static_cast<Eigen::Index>(state.modes));
  for (std::size_t k = 0; k < state.modes; ++k) {
    const std::size_t stride = stride_of(state.modes, state.n_max, k);
    for (std::size_t i = 0; i < state.dimension(); ++i) {
      if (level_of(i, stride, state.n_max) == state.n_max) {
        top(static_cast<Eigen::Index>(k)) += state.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
      }
    }
  }
  return top;
}

TruncatedState evolve_fock(const TruncatedState& initial, const NetworkSpec& spec, double t_final,
                           double dt, const FockEvolveOptions& options) {
  if (!(t_final > 0.0) || !(dt > 0.0)) throw ModelError("evolve_fock: t_final and dt must be positive");
  const FockModel model(spec, initial.n_max, options.sc_occupations);
  check_state(initial, model);

  const auto check_tail = [&](const TruncatedState& s, double t) {
    const double top = top_level_populations(s).maxCoeff();
    if (top > options.tail_tolerance) {
      std::ostringstream os;
      os << "Fock truncation tail " << top << " exceeds " << options.tail_tolerance << " at t = " << t
         << "; increase n_max (currently " << s.n_max << ")";
      throw NumericError(os.str());
    }
  };

  TruncatedState state = initial;
  check_tail(state, 0.0);
  if (options.observer) options.observer(0.0, state);
  const std::size_t every = std::max<std::size_t>(1, options.observe_every);
  const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
  double t = 0.0;
  for (std::size_t n = 1; n <= steps; ++n) {
    const double h = (n == steps) ? t_final - t : dt;
    const CMatrix k1 = model.apply(state.rho);
    const CMatrix k2 = model.apply(state.rho + (0.5 * h) * k1);
    const CMatrix k3 = model.apply(state.rho + (0.5 * h) * k2);
    const CMatrix k4 = model.apply(state.rho + h * k3);
    state.rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = (n == steps) ? t_final : static_cast<double>(n) * dt;
    check_tail(state, t);
    if (options.observer && (n % every == 0 || n == steps)) options.observer(t, state);
  }
  return state;
}

ReducedState extract_covariances(const TruncatedState& state) {
  if (state.dimension() != checked_dimension(state.modes, state.n_max)) {
    throw ModelError("Fock state dimension does not match its mode count and cutoff");
  }
  const auto L = static_cast<Eigen::Index>(state.modes);
  std::vector<ShiftOperator> a, a_dag;
  for (std::size_t k = 0; k < state.modes; ++k) {
    a.push_back(annihilation_operator(state.modes, state.n_max, k));
    a_dag.push_back(creation_operator(state.modes, state.n_max, k));
  }

  ReducedState out{CMatrix(L, L), CMatrix(L, L), CVector(L)};
  for (Eigen::Index k = 0; k < L; ++k) out.mu(k) = expectation(a[static_cast<std::size_t>(k)], state.rho);
  for (Eigen::Index i = 0; i < L; ++i) {
    const auto& ai = a[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < L; ++j) {
      const auto& aj = a[static_cast<std::size_t>(j)];
      const ShiftOperator number = compose(a_dag[static_cast<std::size_t>(j)], ai);
      const ShiftOperator pair = compose(ai, aj);
      out.C(i, j) = expectation(number, state.rho) - std::conj(out.mu(j)) * out.mu(i);
      out.S(i, j) = expectation(pair, state.rho) - out.mu(i) * out.mu(j);
    }
  }
  return out;
}

std::vector<std::string> validate(const TruncatedState& state) {
  std::vector<std::string> violations;
  if (state.rho.rows() != state.rho.cols() ||
      state.dimension() != checked_dimension(state.modes, state.n_max)) {
    violations.push_back("density matrix shape does not match (n_max + 1)^L");
    return violations;
  }
  const Complex trace = state.rho.trace();
  if (std::abs(trace - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "trace is " << trace << ", expected 1";
    violations.push_back(os.str());
  }
  const double asymmetry = (state.rho - state.rho.adjoint()).cwiseAbs().maxCoeff();
  if (asymmetry > 1e-10) {
    violations.push_back("density matrix is not Hermitian (max deviation " + std::to_string(asymmetry) + ")");
  }
  const CMatrix hermitian = 0.5 * (state.rho + state.rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian, Eigen::EigenvaluesOnly);
  const double smallest = eig.eigenvalues().minCoeff();
  if (smallest < -1e-9) {
    violations.push_back("density matrix has a negative eigenvalue " + std::to_string(smallest));
  }
  return violations;
}

std::size_t recommended_cutoff(double occupation, double tail) {
  if (!(occupation >= 0.0) || !(tail > 0.0 && tail < 1.0)) {
    throw ModelError("recommended_cutoff: need occupation >= 0 and 0 < tail < 1");
  }
  if (occupation == 0.0) return 1;
  // Tail beyond n_max is (n / (n + 1))^(n_max + 1).
  const double ratio = occupation / (occupation + 1.0);
  const double levels = std::log(tail) / std::log(ratio);
  const auto n_max = static_cast<std::size_t>(std::max(1.0, std::ceil(levels - 1.0 + 1e-12)));
  return std::pow(ratio, static_cast<double>(n_max + 1)) < tail ? n_max : n_max + 1;
}

}  // namespace oscnet
