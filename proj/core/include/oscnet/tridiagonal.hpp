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

#include "oscnet/types.hpp"

namespace oscnet {

struct TridiagonalInverseDiagonal {
  /// (T^{-1})_kk.
  RVector inverse_diagonal;
  /// e_k with (T^{-1})_kk = 1 / (d_k - e_k); the part of the pivot contributed
  /// by the couplings to both neighbours.
  RVector coupling_shift;
};

/// Diagonal of the inverse of a real symmetric positive-definite tridiagonal
/// matrix with diagonal d (length n) and off-diagonal e (length n-1), in O(n)
/// from forward and backward pivot ratios:
///   r_1 = d_1, r_k = d_k - e_{k-1}^2 / r_{k-1},
///   s_n = d_n, s_k = d_k - e_k^2 / s_{k+1},
///   (T^{-1})_kk = 1 / (d_k - e_{k-1}^2 / r_{k-1} - e_k^2 / s_{k+1}).
/// Throws NumericError if a pivot is not positive.
TridiagonalInverseDiagonal tridiagonal_inverse_diagonal(const RVector& d, const RVector& e);

}  // namespace oscnet
