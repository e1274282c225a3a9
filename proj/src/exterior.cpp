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

#include "stripdet/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stripdet/determinants.hpp"
#include "stripdet/error.hpp"
#include "stripdet/transfer.hpp"

namespace stripdet {

namespace {

void check_width(int width) {
  if (width < 1) throw ConfigError("wedge width must be >= 1");
}

Eigen::MatrixXd rows_of(const Eigen::MatrixXd& m, const std::vector<int>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = m.row(rows[i] - 1);
  return out;
}

/// Sign of the permutation sorting `seq` (distinct entries).
int sort_sign(std::vector<int> seq) {
  int sign = 1;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (seq[i] > seq[j]) sign = -sign;
  return sign;
}

/// det(H_N(u, v) - E) through the block sweep, dense fallback.
SignedLogDet boundary_logdet(const DisorderSample& sample, double energy, int steps,
                             const Eigen::MatrixXd& left, const Eigen::MatrixXd& right) {
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(static_cast<std::size_t>(steps));
  for (int k = 1; k <= steps; ++k) {
    Eigen::MatrixXd m = s_matrix(sample, k);
    m.diagonal().array() -= energy;
    blocks.push_back(std::move(m));
  }
  blocks.front() -= left;
  blocks.back() += right;
  SchurResult r = block_tridiagonal_logdet(blocks);
  if (!r.fallback) return r.det;
  const int w = sample.geometry().width;
  Eigen::MatrixXd h =
      assemble_hamiltonian(sample, Region::rectangle(1, steps, 1, w)).matrix;
  h.topLeftCorner(w, w) -= left;
  h.bottomRightCorner(w, w) += right;
  h.diagonal().array() -= energy;
  return signed_logdet(h).det;
}

Eigen::MatrixXd corrected_block(const WedgeFrame& f) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(f.top());
  const double rc = lu.rcond();
  if (!(rc > 1e-14)) throw SingularityError("frame has singular top block A", rc);
  // B A^{-1} = (A^{-t} B^t)^t
  Eigen::PartialPivLU<Eigen::MatrixXd> lut(f.top().transpose());
  return lut.solve(f.bottom().transpose()).transpose();
}

}  // namespace

// WedgeIndex

WedgeIndex::WedgeIndex(std::vector<int> elements, int width)
    : elems_(std::move(elements)), width_(width) {
  check_width(width);
  std::sort(elems_.begin(), elems_.end());
  if (static_cast<int>(elems_.size()) != width)
    throw ConfigError("wedge index must have exactly W elements");
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    if (elems_[i] < 1 || elems_[i] > 2 * width)
      throw ConfigError("wedge index element outside [1, 2W]");
    if (i > 0 && elems_[i] == elems_[i - 1])
      throw ConfigError("wedge index elements must be distinct");
  }
}

std::vector<WedgeIndex> WedgeIndex::all(int width) {
  check_width(width);
  std::vector<WedgeIndex> out;
  std::vector<int> cur(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) cur[i] = i + 1;
  while (true) {
    out.emplace_back(cur, width);
    int i = width - 1;
    while (i >= 0 && cur[i] == 2 * width - (width - 1 - i)) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < width; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

WedgeIndex WedgeIndex::dirichlet(int width) {
  std::vector<int> e(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) e[i] = i + 1;
  return WedgeIndex(std::move(e), width);
}

bool WedgeIndex::contains(int i) const {
  return std::binary_search(elems_.begin(), elems_.end(), i);
}

// Frames

WedgeFrame standard_frame(const WedgeIndex& alpha) {
  const int w = alpha.width();
  WedgeFrame f{Eigen::MatrixXd::Zero(2 * w, w)};
  for (int c = 0; c < w; ++c) f.columns(alpha.elements()[c] - 1, c) = 1.0;
  return f;
}

WedgeFrame lemma_basis(const WedgeIndex& alpha) {
  const int w = alpha.width();
  std::vector<int> missing, upper;
  for (int i = 1; i <= w; ++i)
    if (!alpha.contains(i)) missing.push_back(i);
  for (int e : alpha.elements())
    if (e > w) upper.push_back(e);
  WedgeFrame f{Eigen::MatrixXd::Zero(2 * w, w)};
  for (int i = 1; i <= w; ++i) f.columns(i - 1, i - 1) = 1.0;
  for (std::size_t j = 0; j < missing.size(); ++j)
    f.columns(upper[j] - 1, missing[j] - 1) = 1.0;
  return f;
}

std::vector<std::pair<WedgeIndex, int>> expand_standard(const WedgeIndex& alpha) {
  const int w = alpha.width();
  std::vector<int> lower, upper, missing;
  for (int e : alpha.elements()) (e <= w ? lower : upper).push_back(e);
  for (int i = 1; i <= w; ++i)
    if (!alpha.contains(i)) missing.push_back(i);
  // Factor order: e_lower..., then one factor per upper element a, whose
  // lower index is phi^{-1}(a) = missing[j].
  std::vector<int> seq = lower;
  seq.insert(seq.end(), missing.begin(), missing.end());
  const int perm_sign = sort_sign(seq);

  const std::size_t m = upper.size();
  std::vector<std::pair<WedgeIndex, int>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    std::vector<int> beta = lower;
    int dropped = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (mask & (std::size_t{1} << j)) {
        beta.push_back(upper[j]);  // (e_a + e_{phi^{-1}(a)}) term
      } else {
        beta.push_back(missing[j]);  // -e_{phi^{-1}(a)} term
        ++dropped;
      }
    }
    int coeff = perm_sign * ((dropped % 2) ? -1 : 1);
    out.emplace_back(WedgeIndex(std::move(beta), w), coeff);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double wedge_inner(const WedgeFrame& u, const WedgeFrame& v) {
  if (u.columns.rows() != v.columns.rows() || u.columns.cols() != v.columns.cols())
    throw ConfigError("wedge_inner: incompatible frames");
  return (u.columns.transpose() * v.columns).determinant();
}

Eigen::VectorXd wedge_coordinates(const WedgeFrame& u) {
  const auto basis = WedgeIndex::all(u.width());
  Eigen::VectorXd out(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    out(i) = rows_of(u.columns, basis[i].elements()).determinant();
  return out;
}

// Minors

SignedLogDet minor(const WedgeIndex& beta, const WedgeIndex& alpha,
                   const Eigen::MatrixXd& t) {
  const int w = alpha.width();
  if (beta.width() != w || t.rows() != 2 * w || t.cols() != 2 * w)
    throw ConfigError("minor: dimension mismatch");
  Eigen::MatrixXd sub(w, w);
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < w; ++j)
      sub(i, j) = t(beta.elements()[i] - 1, alpha.elements()[j] - 1);
  return signed_logdet(sub).det;
}

SignedLogDet frame_pairing(const WedgeFrame& v, const WedgeFrame& u,
                           const DisorderSample& sample, double energy, int steps) {
  PropagatedFrame p = propagate_frame(sample, energy, steps, u.columns);
  return signed_logdet(v.columns.transpose() * p.basis).det * p.scale;
}

SignedLogDet minor(const WedgeIndex& beta, const WedgeIndex& alpha,
                   const DisorderSample& sample, double energy, int steps) {
  return frame_pairing(standard_frame(beta), standard_frame(alpha), sample, energy,
                       steps);
}

Eigen::MatrixXd compound(const Eigen::MatrixXd& t) {
  if (t.rows() != t.cols() || t.rows() % 2 != 0)
    throw ConfigError("compound: need a 2W x 2W matrix");
  const int w = static_cast<int>(t.rows() / 2);
  if (w > kMaxExteriorWidth) throw ConfigError("exterior power limited to W <= 5");
  const auto basis = WedgeIndex::all(w);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd out(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b)
    for (Eigen::Index a = 0; a < dim; ++a) out(b, a) = minor(basis[b], basis[a], t).value();
  return out;
}

// Boundary-modified operators

BoundaryOperator boundary_operator(const DisorderSample& sample, const WedgeFrame& u,
                                   const WedgeFrame& v, int steps) {
  const int w = sample.geometry().width;
  if (u.width() != w || v.width() != w) throw ConfigError("frame width must equal W");
  BoundaryOperator op;
  op.matrix = assemble_hamiltonian(sample, Region::rectangle(1, steps, 1, w)).matrix;
  op.matrix.topLeftCorner(w, w) -= corrected_block(u);
  op.matrix.bottomRightCorner(w, w) += corrected_block(v).transpose();
  op.symmetric = op.matrix == op.matrix.transpose();
  return op;
}

IdentityCheck prop44_check(const DisorderSample& sample, double energy, int steps,
                           const WedgeFrame& u, const WedgeFrame& v) {
  BoundaryOperator op = boundary_operator(sample, u, v, steps);
  op.matrix.diagonal().array() -= energy;
  IdentityCheck c;
  const FactorizedDet f = signed_logdet(op.matrix);
  c.rcond = f.rcond;
  c.lhs = signed_logdet(u.top() * v.top()).det * f.det;
  c.rhs = frame_pairing(v, u, sample, energy, steps);
  c.signs_equal = c.lhs.sign == c.rhs.sign;
  c.gap = (c.lhs.is_zero() && c.rhs.is_zero()) ? 0.0 : std::abs(c.lhs.log_abs - c.rhs.log_abs);
  return c;
}

double sylvester_franke_check(const DisorderSample& sample, double energy, int steps) {
  const int w = sample.geometry().width;
  if (w > kMaxExteriorWidth) throw ConfigError("exterior power limited to W <= 5");
  if (steps < 1 || steps > sample.geometry().columns)
    throw RangeError("Sylvester-Franke check needs 1 <= N <= sampled columns");
  // wedge^W T = prod_k wedge^W step_k, carried as Q * R_N ... R_1 so only the
  // log radii grow.
  const auto dim = static_cast<Eigen::Index>(WedgeIndex::all(w).size());
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(dim, dim);
  double log_abs = 0.0;
  for (int k = 1; k <= steps; ++k) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(compound(one_step(s_matrix(sample, k), energy)) * q);
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (r(i, i) == 0.0) return std::numeric_limits<double>::infinity();
      log_abs += std::log(std::abs(r(i, i)));
    }
    q = qr.householderQ();
  }
  return std::abs(log_abs);
}

FrameGap lemma45_gap(const DisorderSample& sample, double energy, int steps) {
  const int w = sample.geometry().width;
  if (w > 4) throw ConfigError("lemma45_gap enumerates all pairs; W <= 4");
  const auto basis = WedgeIndex::all(w);
  std::vector<Eigen::MatrixXd> corrections;
  for (const auto& a : basis) corrections.push_back(corrected_block(lemma_basis(a)));

  FrameGap g{0.0, WedgeIndex::dirichlet(w), WedgeIndex::dirichlet(w), {}, 0.0};
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(w, w);
  g.dirichlet_log = boundary_logdet(sample, energy, steps, zero, zero).log_abs;
  g.max_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      SignedLogDet f = boundary_logdet(sample, energy, steps, corrections[a],
                                       corrections[b].transpose());
      g.pair_logs.push_back(f.log_abs);
      double gap = f.log_abs - g.dirichlet_log;
      if (gap > g.max_gap) {
        g.max_gap = gap;
        g.alpha = basis[a];
        g.beta = basis[b];
      }
    }
  }
  return g;
}

double norm_minors_constant(const Eigen::MatrixXd& t) {
  const int w = static_cast<int>(t.rows() / 2);
  const Eigen::MatrixXd c = compound(t);
  const double norm = Eigen::JacobiSVD<Eigen::MatrixXd>(c).singularValues()(0);
  const auto basis = WedgeIndex::all(w);
  double total = 0.0;
  for (const auto& a : basis)
    for (const auto& b : basis)
      total += std::abs(
          (lemma_basis(b).columns.transpose() * t * lemma_basis(a).columns).determinant());
  return std::log(norm / total) / w;
}

}  // namespace stripdet
