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

#include "oscnet/tridiagonal.hpp"

#include <sstream>

#include "oscnet/errors.hpp"

namespace oscnet {

namespace {

void require_pivot(double pivot, Eigen::Index k) {
  if (!(pivot > 0.0)) {
    std::ostringstream os;
    os << "tridiagonal matrix is not positive definite (pivot " << pivot << " at row " << k + 1
       << ")";
    throw NumericError(os.str());
  }
}

}  // namespace

TridiagonalInverseDiagonal tridiagonal_inverse_diagonal(const RVector& d, const RVector& e) {
  const auto n = d.size();
  if (n == 0 || e.size() != n - 1) throw ModelError("tridiagonal_inverse_diagonal: bad shapes");

  RVector forward(n);
  RVector backward(n);
  forward(0) = d(0);
  require_pivot(forward(0), 0);
  for (Eigen::Index k = 1; k < n; ++k) {
    forward(k) = d(k) - e(k - 1) * e(k - 1) / forward(k - 1);
    require_pivot(forward(k), k);
  }
  backward(n - 1) = d(n - 1);
  require_pivot(backward(n - 1), n - 1);
  for (Eigen::Index k = n - 2; k >= 0; --k) {
    backward(k) = d(k) - e(k) * e(k) / backward(k + 1);
    require_pivot(backward(k), k);
  }

  TridiagonalInverseDiagonal out{RVector(n), RVector(n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    double shift = 0.0;
    if (k > 0) shift += e(k - 1) * e(k - 1) / forward(k - 1);
    if (k + 1 < n) shift += e(k) * e(k) / backward(k + 1);
    const double pivot = d(k) - shift;
    require_pivot(pivot, k);
    out.coupling_shift(k) = shift;
    out.inverse_diagonal(k) = 1.0 / pivot;
  }
  return out;
}

}  // namespace oscnet
