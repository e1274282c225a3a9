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

#include <map>
#include <utility>
#include <vector>

#include "stripdet/model.hpp"

namespace stripdet {

/// Singular values below rel_tol * ||D|| count as zero.
int numerical_rank(const Eigen::MatrixXd& d, double rel_tol = 1e-9);

/// Ascending eigenvalues of a symmetric matrix.
Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXd& h);

struct WeylReport {
  int rank = 0;
  bool holds = true;
  /// Largest amount by which a chain inequality fails (<= 0 when it holds).
  double worst_violation = 0.0;
};

/// Checks E1_j <= E2_{j+r} and E2_{j-r} <= E1_j with r the numerical rank
/// of H1 - H2; `tol` is relative to max(1, ||H1||, ||H2||).
WeylReport weyl_check(const Eigen::MatrixXd& h1, const Eigen::MatrixXd& h2,
                      double tol = 1e-9);

double log_plus(double x);
double log_minus(double x);

struct InterlacingReport {
  double lhs = 0.0;  // log|det(H1 - E)| - log|det(H2 - E)|
  double rhs = 0.0;  // 4 r max(norm_term, distance_term)
  int rank = 0;
  double norm_term = 0.0;      // log+(|E| + ||H1||)
  double distance_term = 0.0;  // log- dist(E, spec H2)
  /// H2 - E singular: the distance term is +inf and the bound says nothing.
  bool vacuous = false;

  double slack() const { return rhs - lhs; }
};

/// One-sided log-determinant bound for a finite-rank perturbation.
InterlacingReport logdet_gap_bound(const Eigen::MatrixXd& h1, const Eigen::MatrixXd& h2,
                                   double energy);

/// Cells of the lattice (l Z) x (l Z) anchored at the lower-left corner of
/// a rectangle, ordered by first column then lowest row.
std::vector<Region> grid_partition(const Region& rectangle, int cell);

/// (columns, rows) -> number of cells with that shape.
std::map<std::pair<int, int>, int> cell_shapes(const std::vector<Region>& partition);

/// Union over i of the boundary of cell i inside the region.
std::vector<Site> partition_boundary(const Region& region,
                                     const std::vector<Region>& partition,
                                     const StripGeometry& g);

/// Direct sum of the cell restrictions, in the region's row order.
Eigen::MatrixXd direct_sum_hamiltonian(const DisorderSample& sample, const Region& region,
                                       const std::vector<Region>& partition);

struct PartitionDefect {
  double defect = 0.0;  // |log|f_Lambda| - sum_i log|f_Lambda_i||
  double bound = 0.0;   // 4 |boundary| max(log+, log-)
  std::size_t boundary_size = 0;
  int perturbation_rank = 0;  // numerical rank of H_Lambda - direct sum
  double norm_term = 0.0;
  double distance_term = 0.0;

  bool holds(double tol = 1e-8) const { return defect <= bound + tol; }
  bool rank_ok() const {
    return static_cast<std::size_t>(perturbation_rank) <= boundary_size;
  }
};

/// Throws ConfigError unless the cells are disjoint and cover the region.
PartitionDefect partition_defect(const DisorderSample& sample, const Region& region,
                                 const std::vector<Region>& partition, double energy);

}  // namespace stripdet
