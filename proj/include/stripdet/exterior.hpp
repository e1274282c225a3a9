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

#include <utility>
#include <vector>

#include "stripdet/model.hpp"
#include "stripdet/signed_logdet.hpp"

namespace stripdet {

/// Exterior-power dimension is binom(2W, W); matrices are materialized only
/// up to this width (252 x 252).
inline constexpr int kMaxExteriorWidth = 5;

/// alpha subset of {1..2W} with |alpha| = W, sorted ascending.
class WedgeIndex {
 public:
  WedgeIndex(std::vector<int> elements, int width);

  /// All indices for a width, in lexicographic order.
  static std::vector<WedgeIndex> all(int width);
  /// {1, ..., W}
  static WedgeIndex dirichlet(int width);

  const std::vector<int>& elements() const { return elems_; }
  int width() const { return width_; }
  bool contains(int i) const;

  auto operator<=>(const WedgeIndex&) const = default;

 private:
  std::vector<int> elems_;
  int width_;
};

/// 2W x W matrix [u] of a decomposable W-vector with blocks A (top) and B.
struct WedgeFrame {
  Eigen::MatrixXd columns;

  int width() const { return static_cast<int>(columns.cols()); }
  Eigen::MatrixXd top() const { return columns.topRows(width()); }
  Eigen::MatrixXd bottom() const { return columns.bottomRows(width()); }
};

/// [e_alpha]: columns e_i, i in alpha.
WedgeFrame standard_frame(const WedgeIndex& alpha);

/// Frame u_alpha with A = I and B having unit columns: column i is e_i when
/// i is in alpha, otherwise e_i + e_{phi(i)}, where phi is the
/// order-preserving bijection from [1, W] \ alpha onto alpha & [W+1, 2W].
WedgeFrame lemma_basis(const WedgeIndex& alpha);

/// Integer coefficients c_beta in {-1, +1} with e_alpha = sum_beta c_beta
/// u_beta; absent beta have coefficient 0.
std::vector<std::pair<WedgeIndex, int>> expand_standard(const WedgeIndex& alpha);

/// <u, v> = det([u]^t [v]).
double wedge_inner(const WedgeFrame& u, const WedgeFrame& v);

/// Standard wedge coordinates of u: minors det([e_beta]^t [u]) over all beta,
/// ordered as WedgeIndex::all.
Eigen::VectorXd wedge_coordinates(const WedgeFrame& u);

/// det([e_beta]^t T [e_alpha]).
SignedLogDet minor(const WedgeIndex& beta, const WedgeIndex& alpha,
                   const Eigen::MatrixXd& t);
/// Same minor of T_N^E for a sample, from a log-scaled frame.
SignedLogDet minor(const WedgeIndex& beta, const WedgeIndex& alpha,
                   const DisorderSample& sample, double energy, int steps);

/// det([v]^t T_N^E [u]) in log-scaled form.
SignedLogDet frame_pairing(const WedgeFrame& v, const WedgeFrame& u,
                           const DisorderSample& sample, double energy, int steps);

/// W-th compound matrix of a 2W x 2W matrix (entries are W x W minors).
Eigen::MatrixXd compound(const Eigen::MatrixXd& t);

struct BoundaryOperator {
  Eigen::MatrixXd matrix;  // NW x NW
  bool symmetric = false;
};

/// H_N(u, v): H_N with S_1 -> S_1 - B_u A_u^{-1} and
/// S_N -> S_N + (B_v A_v^{-1})^t. Throws SingularityError for singular A.
BoundaryOperator boundary_operator(const DisorderSample& sample, const WedgeFrame& u,
                                   const WedgeFrame& v, int steps);

struct IdentityCheck {
  SignedLogDet lhs;
  SignedLogDet rhs;
  double gap = 0.0;  // |lhs.log_abs - rhs.log_abs|, 0 when both vanish
  bool signs_equal = false;
  double rcond = 0.0;  // of H_N(u, v) - E
};

/// det(A_u A_v) f_N^E(u, v) against det([v]^t T_N^E [u]).
IdentityCheck prop44_check(const DisorderSample& sample, double energy, int steps,
                           const WedgeFrame& u, const WedgeFrame& v);

/// |log|det wedge^W T_N^E||, computed from per-column log-scaled minors.
double sylvester_franke_check(const DisorderSample& sample, double energy, int steps);

struct FrameGap {
  double max_gap = 0.0;
  WedgeIndex alpha;
  WedgeIndex beta;
  /// Every pair's log|f_N^E(u_alpha, u_beta)| in WedgeIndex::all order.
  std::vector<double> pair_logs;
  double dirichlet_log = 0.0;
};

/// max over (alpha, beta) of log|f_N^E(u_alpha, u_beta)| - log|f_N^E|.
FrameGap lemma45_gap(const DisorderSample& sample, double energy, int steps);

/// Smallest C with ||wedge^W T|| <= exp(C W) sum_{alpha, beta}
/// |det([u_beta]^t T [u_alpha])|, for a given T.
double norm_minors_constant(const Eigen::MatrixXd& t);

}  // namespace stripdet
