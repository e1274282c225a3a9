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

#include <cmath>
#include <limits>
#include <string>

namespace stripdet {

/// A real number stored as sign * exp(log_abs). Zero is sign 0 with
/// log_abs = -inf. Products add log magnitudes, so determinants of
/// |Lambda| ~ 10^4 never overflow.
struct SignedLogDet {
  int sign = 0;
  double log_abs = -std::numeric_limits<double>::infinity();

  static SignedLogDet zero() { return {}; }
  static SignedLogDet one() { return {1, 0.0}; }
  static SignedLogDet from_value(double x);

  bool is_zero() const { return sign == 0; }
  /// May overflow to +-inf; intended for small values in tests.
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

  SignedLogDet& operator*=(const SignedLogDet& o);
  SignedLogDet& operator/=(const SignedLogDet& o);
  friend SignedLogDet operator*(SignedLogDet a, const SignedLogDet& b) {
    return a *= b;
  }
  friend SignedLogDet operator/(SignedLogDet a, const SignedLogDet& b) {
    return a /= b;
  }
};

std::string to_string(const SignedLogDet& d);

/// Pivot magnitude treated as an exact zero.
inline constexpr double kZeroPivot = 1e-300;

struct FactorizedDet {
  SignedLogDet det;
  /// Reciprocal condition estimate (LAPACK-style, 1-norm) of the matrix.
  double rcond = 0.0;
};

/// Determinant of a square matrix from a partially pivoted LU factorization,
/// accumulated in log domain. Throws NumericError on non-finite input.
FactorizedDet signed_logdet(const Eigen::MatrixXd& a);

}  // namespace stripdet
