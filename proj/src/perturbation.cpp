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

#include "stripdet/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "stripdet/error.hpp"
#include "stripdet/signed_logdet.hpp"

namespace stripdet {

int numerical_rank(const Eigen::MatrixXd& d, double rel_tol) {
  if (d.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = rel_tol * s(0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols()) throw ConfigError("eigenvalues need a square matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed");
  return es.eigenvalues();
}

WeylReport weyl_check(const Eigen::MatrixXd& h1, const Eigen::MatrixXd& h2, double tol) {
  if (h1.rows() != h2.rows() || h1.cols() != h2.cols())
    throw ConfigError("weyl_check: matrices differ in dimension");
  const Eigen::VectorXd e1 = sorted_eigenvalues(h1), e2 = sorted_eigenvalues(h2);
  WeylReport rep;
  rep.rank = numerical_rank(h1 - h2);
  const double scale =
      std::max({1.0, e1.cwiseAbs().maxCoeff(), e2.cwiseAbs().maxCoeff()});
  const Eigen::Index n = e1.size(), r = rep.rank;
  rep.worst_violation = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j + r < n; ++j)
    rep.worst_violation = std::max(rep.worst_violation, e1(j) - e2(j + r));
  for (Eigen::Index j = r; j < n; ++j)
    rep.worst_violation = std::max(rep.worst_violation, e2(j - r) - e1(j));
  if (r >= n) rep.worst_violation = 0.0;
  rep.holds = rep.worst_violation <= tol * scale;
  return rep;
}

double log_plus(double x) { return std::max(std::log(x), 0.0); }
double log_minus(double x) { return std::max(-std::log(x), 0.0); }

InterlacingReport logdet_gap_bound(const Eigen::MatrixXd& h1, const Eigen::MatrixXd& h2,
                                   double energy) {
  if (h1.rows() != h2.rows() || h1.cols() != h2.cols())
    throw ConfigError("logdet_gap_bound: matrices differ in dimension");
  const auto n = h1.rows();
  const Eigen::MatrixXd shift = energy * Eigen::MatrixXd::Identity(n, n);
  InterlacingReport rep;
  rep.rank = numerical_rank(h1 - h2);
  const Eigen::VectorXd e1 = sorted_eigenvalues(h1), e2 = sorted_eigenvalues(h2);
  const double norm1 = n ? e1.cwiseAbs().maxCoeff() : 0.0;
  const double dist = n ? (e2.array() - energy).abs().minCoeff()
                        : std::numeric_limits<double>::infinity();
  rep.norm_term = log_plus(std::abs(energy) + norm1);
  rep.distance_term = log_minus(dist);
  const SignedLogDet d1 = signed_logdet(h1 - shift).det;
  const SignedLogDet d2 = signed_logdet(h2 - shift).det;
  if (d2.is_zero() || dist == 0.0) {
    rep.vacuous = true;
    rep.rhs = std::numeric_limits<double>::infinity();
    rep.lhs = d1.is_zero() ? 0.0 : std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.lhs = d1.is_zero() ? -std::numeric_limits<double>::infinity() : d1.log_abs - d2.log_abs;
  rep.rhs = 4.0 * rep.rank * std::max(rep.norm_term, rep.distance_term);
  return rep;
}

std::vector<Region> grid_partition(const Region& rectangle, int cell) {
  if (!rectangle.is_rectangle()) throw ConfigError("grid_partition needs a rectangle");
  if (cell < 1) throw ConfigError("cell side must be >= 1");
  std::vector<Region> out;
  const int n0 = rectangle.first_column(), n1 = rectangle.last_column();
  const int w0 = rectangle.lowest_row(), w1 = rectangle.highest_row();
  for (int n = n0; n <= n1; n += cell)
    for (int w = w0; w <= w1; w += cell)
      out.push_back(Region::rectangle(n, std::min(n + cell - 1, n1), w,
                                      std::min(w + cell - 1, w1)));
  return out;
}

std::map<std::pair<int, int>, int> cell_shapes(const std::vector<Region>& partition) {
  std::map<std::pair<int, int>, int> out;
  for (const Region& r : partition) {
    if (!r.is_rectangle()) throw ConfigError("cell_shapes needs rectangular cells");
    ++out[{r.last_column() - r.first_column() + 1, r.highest_row() - r.lowest_row() + 1}];
  }
  return out;
}

std::vector<Site> partition_boundary(const Region& region,
                                     const std::vector<Region>& partition,
                                     const StripGeometry& g) {
  std::set<Site> all;
  for (const Region& cell : partition)
    for (const Site& s : boundary(region, cell, g)) all.insert(s);
  return {all.begin(), all.end()};
}

namespace {

std::vector<int> cell_of_rows(const HamiltonianMatrix& h, const std::vector<Region>& partition) {
  std::vector<int> cell(h.sites.size(), -1);
  for (std::size_t c = 0; c < partition.size(); ++c) {
    for (const Site& s : partition[c].sites()) {
      const int row = h.row_of(s);
      if (row < 0) throw ConfigError("partition cell leaves the region");
      if (cell[row] >= 0) throw ConfigError("partition cells overlap");
      cell[row] = static_cast<int>(c);
    }
  }
  for (int c : cell)
    if (c < 0) throw ConfigError("partition does not cover the region");
  return cell;
}

}  // namespace

Eigen::MatrixXd direct_sum_hamiltonian(const DisorderSample& sample, const Region& region,
                                       const std::vector<Region>& partition) {
  const HamiltonianMatrix h = assemble_hamiltonian(sample, region);
  const std::vector<int> cell = cell_of_rows(h, partition);
  Eigen::MatrixXd out = h.matrix;
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      if (cell[i] != cell[j]) out(i, j) = 0.0;
  return out;
}

PartitionDefect partition_defect(const DisorderSample& sample, const Region& region,
                                 const std::vector<Region>& partition, double energy) {
  const HamiltonianMatrix h = assemble_hamiltonian(sample, region);
  const std::vector<int> cell = cell_of_rows(h, partition);
  Eigen::MatrixXd sum = h.matrix;
  for (Eigen::Index i = 0; i < sum.rows(); ++i)
    for (Eigen::Index j = 0; j < sum.cols(); ++j)
      if (cell[i] != cell[j]) sum(i, j) = 0.0;

  PartitionDefect out;
  out.boundary_size = partition_boundary(region, partition, sample.geometry()).size();
  out.perturbation_rank = numerical_rank(h.matrix - sum);

  const auto n = h.matrix.rows();
  const Eigen::MatrixXd shift = energy * Eigen::MatrixXd::Identity(n, n);
  const SignedLogDet whole = signed_logdet(h.matrix - shift).det;
  const SignedLogDet parts = signed_logdet(sum - shift).det;
  const double inf = std::numeric_limits<double>::infinity();

  // Spectrum of the direct sum is the union of the cell spectra.
  const Eigen::VectorXd e_whole = sorted_eigenvalues(h.matrix);
  const Eigen::VectorXd e_parts = sorted_eigenvalues(sum);
  const double dist = std::min((e_whole.array() - energy).abs().minCoeff(),
                               (e_parts.array() - energy).abs().minCoeff());
  out.norm_term = log_plus(std::abs(energy) + e_whole.cwiseAbs().maxCoeff());
  out.distance_term = dist > 0 ? log_minus(dist) : inf;
  out.bound = out.boundary_size == 0
                  ? 0.0
                  : 4.0 * static_cast<double>(out.boundary_size) *
                        std::max(out.norm_term, out.distance_term);
  if (whole.is_zero() && parts.is_zero()) {
    out.defect = out.boundary_size == 0 ? 0.0 : inf;
  } else if (whole.is_zero() || parts.is_zero()) {
    out.defect = inf;
  } else {
    out.defect = std::abs(whole.log_abs - parts.log_abs);
  }
  return out;
}

}  // namespace stripdet
