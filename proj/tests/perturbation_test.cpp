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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "stripdet/determinants.hpp"
#include "stripdet/error.hpp"
#include "stripdet/perturbation.hpp"
#include "stripdet/rng.hpp"
#include "test_support.hpp"

namespace stripdet {
namespace {

Eigen::MatrixXd random_symmetric(int n, CounterRng& rng) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = rng.uniform(-2, 2);
  return m;
}

Eigen::MatrixXd low_rank(int n, int r, CounterRng& rng) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < r; ++k) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = rng.uniform(-1, 1);
    d += rng.uniform(-3, 3) * x * x.transpose();
  }
  return d;
}

TEST(NumericalRank, KnownRanks) {
  CounterRng rng(1);
  EXPECT_EQ(numerical_rank(Eigen::MatrixXd::Zero(5, 5)), 0);
  for (int r = 1; r <= 4; ++r) EXPECT_EQ(numerical_rank(low_rank(12, r, rng)), r);
}

TEST(Weyl, IdenticalMatrices) {
  CounterRng rng(2);
  const Eigen::MatrixXd h = random_symmetric(8, rng);
  const auto w = weyl_check(h, h);
  EXPECT_EQ(w.rank, 0);
  EXPECT_TRUE(w.holds);
}

TEST(Weyl, PositiveRankOneUpdate) {
  CounterRng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd h1 = random_symmetric(10, rng);
    Eigen::VectorXd x(10);
    for (int i = 0; i < 10; ++i) x(i) = rng.uniform(-1, 1);
    const Eigen::MatrixXd h2 = h1 + 0.7 * x * x.transpose();
    const auto w = weyl_check(h1, h2);
    EXPECT_EQ(w.rank, 1);
    EXPECT_TRUE(w.holds);
    // Independent oracle: a positive rank-one update interlaces,
    // E1_j <= E2_j <= E1_{j+1}.
    const Eigen::VectorXd e1 = sorted_eigenvalues(h1), e2 = sorted_eigenvalues(h2);
    for (int j = 0; j < 10; ++j) {
      EXPECT_LE(e1(j), e2(j) + 1e-10);
      if (j + 1 < 10) EXPECT_LE(e2(j), e1(j + 1) + 1e-10);
    }
  }
}

TEST(Weyl, RandomLowRankPerturbations) {
  CounterRng rng(4);
  int violations = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 2 + static_cast<int>(rng.index(19));
    const int r = 1 + static_cast<int>(rng.index(3));
    const Eigen::MatrixXd h1 = random_symmetric(n, rng);
    const Eigen::MatrixXd h2 = h1 + low_rank(n, std::min(r, n), rng);
    if (!weyl_check(h1, h2).holds) ++violations;
    if (!weyl_check(h2, h1).holds) ++violations;
  }
  EXPECT_EQ(violations, 0);
}

TEST(LogdetGapBound, IdenticalMatrices) {
  CounterRng rng(5);
  const Eigen::MatrixXd h = random_symmetric(6, rng);
  const auto rep = logdet_gap_bound(h, h, 0.1);
  EXPECT_NEAR(rep.lhs, 0.0, 1e-12);
  EXPECT_EQ(rep.rhs, 0.0);
  EXPECT_EQ(rep.rank, 0);
}

TEST(LogdetGapBound, ChainSplitInTwo) {
  // Free chain of four sites against two decoupled pairs, E = 1/2.
  const double e = 0.5;
  auto f = [&](int n) {
    double fm = 1.0, fc = -e;
    for (int k = 1; k < n; ++k) {
      const double next = -e * fc - fm;
      fm = fc;
      fc = next;
    }
    return fc;
  };
  const auto s = testing::zero_sample(1, 4, false);
  const Eigen::MatrixXd h1 = assemble_hamiltonian(s, Region::strip(s.geometry())).matrix;
  Eigen::MatrixXd h2 = h1;
  h2(1, 2) = h2(2, 1) = 0.0;
  const auto rep = logdet_gap_bound(h1, h2, e);
  EXPECT_NEAR(rep.lhs, std::log(std::abs(f(4))) - 2 * std::log(std::abs(f(2))), 1e-12);
  EXPECT_EQ(rep.rank, 2);
  EXPECT_LE(rep.lhs, rep.rhs);
  EXPECT_FALSE(rep.vacuous);
  const double norm = h1.operatorNorm();
  EXPECT_NEAR(rep.norm_term, std::log(std::abs(e) + norm), 1e-12);
}

TEST(LogdetGapBound, SingularReferenceIsVacuous) {
  Eigen::MatrixXd h1 = Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd h2 = Eigen::MatrixXd::Identity(3, 3);
  h2(0, 0) = 0.0;
  const auto rep = logdet_gap_bound(h1, h2, 0.0);
  EXPECT_TRUE(rep.vacuous);
}

TEST(LogdetGapBound, RandomTrialsBothOrders) {
  CounterRng rng(6);
  int violations = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 2 + static_cast<int>(rng.index(23));
    const Eigen::MatrixXd h1 = random_symmetric(n, rng);
    const Eigen::MatrixXd h2 = h1 + low_rank(n, 1 + static_cast<int>(rng.index(3)), rng);
    const double e = rng.uniform(-3, 3);
    for (const auto& rep : {logdet_gap_bound(h1, h2, e), logdet_gap_bound(h2, h1, e)})
      if (!rep.vacuous && rep.lhs > rep.rhs + 1e-9) ++violations;
  }
  EXPECT_EQ(violations, 0);
}

TEST(LogdetGapBound, OneSidedFormIsNotSymmetric) {
  // Large reference spectrum gap, tiny perturbed determinant: the bound for
  // (H1, H2) holds while lhs for the swapped pair is large and positive.
  Eigen::MatrixXd h2 = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd h1 = h2;
  h1(0, 0) = 1e-12;
  const auto rep = logdet_gap_bound(h1, h2, 0.0);
  EXPECT_LT(rep.lhs, 0.0);
  EXPECT_LE(rep.lhs, rep.rhs);
  const auto swapped = logdet_gap_bound(h2, h1, 0.0);
  EXPECT_GT(swapped.lhs, 20.0);
  EXPECT_LE(swapped.lhs, swapped.rhs);
}

TEST(GridPartition, LargeCellIsWholeRectangle) {
  const Region r = Region::rectangle(1, 5, 1, 3);
  const auto p = grid_partition(r, 6);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], r);
}

TEST(GridPartition, FiveByThreeWithSideTwo) {
  // Columns split 2 + 2 + 1, rows 2 + 1: enumerate the product directly.
  const Region r = Region::rectangle(1, 5, 1, 3);
  const auto p = grid_partition(r, 2);
  std::map<std::pair<int, int>, int> expect;
  for (int cw : {2, 2, 1})
    for (int rh : {2, 1}) ++expect[{cw, rh}];
  EXPECT_EQ(cell_shapes(p), expect);
  EXPECT_EQ(expect.at({2, 2}), 2);
  EXPECT_EQ(expect.at({2, 1}), 2);
  EXPECT_EQ(expect.at({1, 2}), 1);
  EXPECT_EQ(expect.at({1, 1}), 1);
  std::size_t covered = 0;
  for (const auto& c : p) covered += c.size();
  EXPECT_EQ(covered, r.size());
  EXPECT_EQ(p.front().first_column(), 1);
  EXPECT_EQ(p.front().lowest_row(), 1);
}

TEST(GridPartition, AtMostFourShapes) {
  for (int n = 1; n <= 12; ++n)
    for (int w = 1; w <= 5; ++w)
      for (int l = 1; l <= 6; ++l)
        EXPECT_LE(cell_shapes(grid_partition(Region::rectangle(1, n, 1, w), l)).size(), 4u);
}

TEST(GridPartition, BoundaryScalesLikeAreaOverCell) {
  double worst = 0.0;
  for (int l = 2; l <= 6; ++l) {
    const StripGeometry g{6, 1, 36};
    const Region r = Region::strip(g);
    const auto b = partition_boundary(r, grid_partition(r, l), g);
    const double c = static_cast<double>(b.size()) * l / (g.bandwidth * static_cast<double>(r.size()));
    worst = std::max(worst, c);
  }
  EXPECT_LE(worst, 4.0);
  RecordProperty("boundary_constant", std::to_string(worst));
}

TEST(PartitionDefect, TrivialPartition) {
  const auto spec = testing::uniform_spec(-2, 2, CouplingLaw::Kind::Adjacency, 2, 1);
  const auto s = sample_disorder(StripGeometry{2, 1, 4}, spec, 1);
  const Region r = Region::strip(s.geometry());
  const auto pd = partition_defect(s, r, {r}, 0.3);
  EXPECT_NEAR(pd.defect, 0.0, 1e-12);
  EXPECT_EQ(pd.boundary_size, 0u);
  EXPECT_EQ(pd.perturbation_rank, 0);
}

TEST(PartitionDefect, ChainSplitAtSecondColumn) {
  const auto s = testing::zero_sample(1, 4, false);
  const Region r = Region::strip(s.geometry());
  const double e = 0.5;
  const auto pd = partition_defect(s, r, {Region::rectangle(1, 2, 1, 1), Region::rectangle(3, 4, 1, 1)}, e);
  // f_4 = 1/16 - 3/4 + 1 = 5/16, f_2 = 1/4 - 1 = -3/4.
  EXPECT_NEAR(pd.defect, std::abs(std::log(5.0 / 16.0) - 2 * std::log(0.75)), 1e-12);
  EXPECT_EQ(pd.boundary_size, 2u);
  EXPECT_TRUE(pd.holds());
  EXPECT_TRUE(pd.rank_ok());
}

TEST(PartitionDefect, RandomGridPartitions) {
  CounterRng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int w = 1 + static_cast<int>(rng.index(3));
    const int n = 2 + static_cast<int>(rng.index(10));
    const auto spec = trial % 2 ? testing::cauchy_spec(CouplingLaw::Kind::Adjacency, w, 1)
                                : testing::uniform_spec(-2, 2, CouplingLaw::Kind::Adjacency, w, 1);
    const auto s = sample_disorder(StripGeometry{w, 1, n}, spec, 900 + trial);
    const Region r = Region::strip(s.geometry());
    const int l = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(r.size()))));
    const auto pd = partition_defect(s, r, grid_partition(r, l), rng.uniform(-1, 1));
    EXPECT_TRUE(pd.holds()) << pd.defect << " > " << pd.bound;
    EXPECT_TRUE(pd.rank_ok());
  }
}

TEST(PartitionDefect, RejectsInvalidPartitions) {
  const auto s = testing::zero_sample(1, 4, false);
  const Region r = Region::strip(s.geometry());
  EXPECT_THROW(partition_defect(s, r, {Region::rectangle(1, 2, 1, 1)}, 0.5), ConfigError);
  EXPECT_THROW(partition_defect(s, r,
                                {Region::rectangle(1, 3, 1, 1), Region::rectangle(3, 4, 1, 1)},
                                0.5),
               ConfigError);
}

TEST(DirectSum, DropsCrossCellBonds) {
  const auto spec = testing::uniform_spec(-2, 2, CouplingLaw::Kind::Adjacency, 2, 1);
  const auto s = sample_disorder(StripGeometry{2, 1, 4}, spec, 3);
  const Region r = Region::strip(s.geometry());
  const auto p = grid_partition(r, 2);
  const Eigen::MatrixXd h = assemble_hamiltonian(s, r).matrix;
  const Eigen::MatrixXd d = direct_sum_hamiltonian(s, r, p);
  const Eigen::MatrixXd diff = h - d;
  // Two cut bonds; each contributes a rank-2 symmetric pair.
  EXPECT_EQ(numerical_rank(diff), 4);
  EXPECT_EQ(partition_boundary(r, p, s.geometry()).size(), 4u);
  EXPECT_EQ(diff.diagonal().norm(), 0.0);
}

}  // namespace
}  // namespace stripdet
