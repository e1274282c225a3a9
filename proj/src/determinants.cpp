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

#include "stripdet/determinants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stripdet/error.hpp"
#include "stripdet/transfer.hpp"

namespace stripdet {

namespace {

constexpr double kSchurRcondFloor = 1e-13;

}  // namespace

SignedLogDet logdet_direct(const HamiltonianMatrix& h, double energy, double* rcond) {
  Eigen::MatrixXd a = h.matrix;
  a.diagonal().array() -= energy;
  FactorizedDet f = signed_logdet(a);
  if (rcond) *rcond = f.rcond;
  return f.det;
}

SignedLogDet logdet_via_transfer(const DisorderSample& sample, double energy,
                                 int steps) {
  const int w = sample.geometry().width;
  if (steps < 1 || steps > sample.geometry().columns)
    throw RangeError("transfer route needs 1 <= N <= sampled columns");
  Eigen::MatrixXd dirichlet = Eigen::MatrixXd::Zero(2 * w, w);
  dirichlet.topRows(w).setIdentity();
  PropagatedFrame f = propagate_frame(sample, energy, steps, dirichlet);
  // [I 0] T [I; 0] = (top block of basis) * R
  return signed_logdet(f.basis.topRows(w)).det * f.scale;
}

SchurResult block_tridiagonal_logdet(std::span<const Eigen::MatrixXd> blocks) {
  SchurResult out;
  out.det = SignedLogDet::one();
  if (blocks.empty()) return out;
  Eigen::MatrixXd reduced = blocks.back();
  for (std::size_t k = blocks.size(); k-- > 0;) {
    if (!reduced.allFinite()) throw NumericError("non-finite block in Schur sweep");
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(reduced);
    double rc = lu.rcond();
    if (!(rc > kSchurRcondFloor)) {
      out.fallback = true;
      out.det = SignedLogDet::zero();
      return out;
    }
    const Eigen::MatrixXd& f = lu.matrixLU();
    SignedLogDet d = SignedLogDet::one();
    d.sign = static_cast<int>(lu.permutationP().determinant());
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
      if (f(i, i) < 0) d.sign = -d.sign;
      d.log_abs += std::log(std::abs(f(i, i)));
    }
    out.det *= d;
    if (k == 0) break;
    // Gamma Mt^{-1} Gamma^t with Gamma = [0 ... 0 -I]^t only touches block k-1.
    reduced = blocks[k - 1] - lu.inverse();
  }
  return out;
}

SchurResult logdet_via_schur(const DisorderSample& sample, double energy, int steps) {
  if (steps < 1 || steps > sample.geometry().columns)
    throw RangeError("Schur route needs 1 <= N <= sampled columns");
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(static_cast<std::size_t>(steps));
  for (int k = 1; k <= steps; ++k) {
    Eigen::MatrixXd m = s_matrix(sample, k);
    m.diagonal().array() -= energy;
    blocks.push_back(std::move(m));
  }
  SchurResult r = block_tridiagonal_logdet(blocks);
  if (r.fallback) {
    r.det = logdet_direct(
        assemble_hamiltonian(sample, Region::rectangle(1, steps, 1, sample.geometry().width)),
        energy);
  }
  return r;
}

SignedLogDet region_logdet(const DisorderSample& sample, const Region& region,
                           double energy) {
  if (!region.fits(sample.geometry())) throw RangeError("region exceeds sampled extent");
  if (region.is_rectangle()) {
    const int w0 = region.lowest_row(), w1 = region.highest_row();
    std::vector<Eigen::MatrixXd> blocks;
    for (int n = region.first_column(); n <= region.last_column(); ++n) {
      Eigen::MatrixXd m = s_matrix(sample, n).block(w0 - 1, w0 - 1, w1 - w0 + 1, w1 - w0 + 1);
      m.diagonal().array() -= energy;
      blocks.push_back(std::move(m));
    }
    SchurResult r = block_tridiagonal_logdet(blocks);
    if (!r.fallback) return r.det;
  }
  return logdet_direct(assemble_hamiltonian(sample, region), energy);
}

double xi_k(const DisorderSample& sample, const Region& region, const Site& k,
            double energy) {
  if (!region.contains(k)) throw ConfigError("site k is not in the region");
  const HamiltonianMatrix full = assemble_hamiltonian(sample, region);
  const int row = full.row_of(k);
  const Eigen::MatrixXd& u = sample.coupling(k.n);
  const double diag_u = u(k.w - 1, k.w - 1);
  if (full.sites.size() == 1) return diag_u + energy;

  const Eigen::Index m = static_cast<Eigen::Index>(full.sites.size()) - 1;
  std::vector<Eigen::Index> keep;
  keep.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i <= m; ++i)
    if (i != row) keep.push_back(i);
  Eigen::MatrixXd rest(m, m);
  Eigen::VectorXd gamma(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    gamma(a) = full.matrix(row, keep[a]);
    for (Eigen::Index b = 0; b < m; ++b) rest(a, b) = full.matrix(keep[a], keep[b]);
    rest(a, a) -= energy;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(rest);
  const double rc = lu.rcond();
  if (!(rc > 1e-14))
    throw SingularityError("H_{Lambda \\ k} - E is numerically singular", rc);
  return diag_u + energy + gamma.dot(lu.solve(gamma));
}

double route_tolerance(double log_abs, long size, double rcond) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double cond = rcond > 0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  return 1e-8 * std::max(1.0, std::abs(log_abs)) + 10.0 * size * eps * cond;
}

RouteComparison compare_routes(const DisorderSample& sample, double energy, int steps) {
  RouteComparison c;
  const Region rect = Region::rectangle(1, steps, 1, sample.geometry().width);
  c.direct = logdet_direct(assemble_hamiltonian(sample, rect), energy, &c.rcond);
  c.transfer = logdet_via_transfer(sample, energy, steps);
  c.schur = logdet_via_schur(sample, energy, steps);
  c.signs_equal = c.direct.sign == c.transfer.sign && c.direct.sign == c.schur.det.sign;
  const bool all_zero = c.direct.is_zero() && c.transfer.is_zero() && c.schur.det.is_zero();
  if (all_zero) {
    c.gap = 0.0;
  } else {
    const double a = c.direct.log_abs, b = c.transfer.log_abs, s = c.schur.det.log_abs;
    c.gap = std::max({std::abs(a - b), std::abs(a - s), std::abs(b - s)});
  }
  c.tolerance = route_tolerance(c.direct.log_abs, static_cast<long>(rect.size()), c.rcond);
  c.agree = c.signs_equal && (all_zero || c.gap <= c.tolerance);
  return c;
}

}  // namespace stripdet
