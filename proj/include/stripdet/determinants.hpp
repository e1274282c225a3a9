// Copyright 2026 The stripdet Authors
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

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "stripdet/model.hpp"
#include "stripdet/signed_logdet.hpp"

namespace stripdet {

/// det(H - E) by pivoted LU. `rcond`, when given, receives the reciprocal
/// condition estimate of H - E.
SignedLogDet logdet_direct(const HamiltonianMatrix& h, double energy,
                           double* rcond = nullptr);

/// det of the top-left W x W block of T_N^E, from a W-column frame pushed
/// through the cocycle in log-scaled form.
SignedLogDet logdet_via_transfer(const DisorderSample& sample, double energy,
                                 int steps);

struct SchurResult {
  SignedLogDet det;
  /// Set when an intermediate block was singular and the direct route was
  /// used instead.
  bool fallback = false;
};

/// Peels the last column block repeatedly:
///   det A_{k} = det Mt_k * det(A_{k-1} with M_{k-1} -> M_{k-1} - Mt_k^{-1}),
/// starting from Mt_N = M_N, with M_k = S_k - E.
SchurResult logdet_via_schur(const DisorderSample& sample, double energy, int steps);

/// Block-tridiagonal determinant with -I off-diagonal blocks; `blocks` are
/// the diagonal blocks. `fallback` is set (and the det left zero) when an
/// intermediate block is numerically singular.
SchurResult block_tridiagonal_logdet(std::span<const Eigen::MatrixXd> blocks);

/// log|f_Lambda^E| for a region: block sweep on rectangles (with direct
/// fallback), dense LU otherwise.
SignedLogDet region_logdet(const DisorderSample& sample, const Region& region,
                           double energy);

/// xi_k with f_Lambda^E = (V_k - xi_k) f_{Lambda \ k}^E. Throws
/// SingularityError when H_{Lambda \ k} - E is numerically singular.
double xi_k(const DisorderSample& sample, const Region& region, const Site& k,
            double energy);

struct RouteComparison {
  SignedLogDet direct;
  SignedLogDet transfer;
  SchurResult schur;
  double rcond = 0.0;
  /// max |log_abs difference| over the three routes
  double gap = 0.0;
  double tolerance = 0.0;
  bool signs_equal = false;
  bool agree = false;
};

/// Allowed log_abs disagreement: 1e-8 relative, widened in proportion to the
/// condition number of H - E near an eigenvalue.
double route_tolerance(double log_abs, long size, double rcond);

RouteComparison compare_routes(const DisorderSample& sample, double energy, int steps);

}  // namespace stripdet
