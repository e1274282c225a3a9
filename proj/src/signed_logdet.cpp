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

#include "stripdet/signed_logdet.hpp"

#include <sstream>

#include "stripdet/error.hpp"

namespace stripdet {

SignedLogDet SignedLogDet::from_value(double x) {
  if (x == 0.0) return zero();
  return {x > 0 ? 1 : -1, std::log(std::abs(x))};
}

SignedLogDet& SignedLogDet::operator*=(const SignedLogDet& o) {
  if (sign == 0 || o.sign == 0) {
    *this = zero();
    return *this;
  }
  sign *= o.sign;
  log_abs += o.log_abs;
  return *this;
}

SignedLogDet& SignedLogDet::operator/=(const SignedLogDet& o) {
  if (o.sign == 0) throw NumericError("division by a zero SignedLogDet");
  if (sign == 0) return *this;
  sign *= o.sign;
  log_abs -= o.log_abs;
  return *this;
}

std::string to_string(const SignedLogDet& d) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << d.sign << ", " << d.log_abs << ")";
  return os.str();
}

FactorizedDet signed_logdet(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw NumericError("determinant of a non-square matrix");
  if (a.size() == 0) return {SignedLogDet::one(), 1.0};
  if (!a.allFinite()) throw NumericError("non-finite matrix entry");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::MatrixXd& f = lu.matrixLU();
  FactorizedDet out;
  out.det = SignedLogDet::one();
  out.det.sign = static_cast<int>(lu.permutationP().determinant());
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    double p = f(i, i);
    if (std::abs(p) < kZeroPivot) {
      out.det = SignedLogDet::zero();
      out.rcond = 0.0;
      return out;
    }
    if (p < 0) out.det.sign = -out.det.sign;
    out.det.log_abs += std::log(std::abs(p));
  }
  out.rcond = lu.rcond();
  return out;
}

}  // namespace stripdet
