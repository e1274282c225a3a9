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

#include "stripdet/determinants.hpp"
#include "stripdet/error.hpp"
#include "stripdet/exterior.hpp"
#include "stripdet/rng.hpp"
#include "stripdet/transfer.hpp"
#include "test_support.hpp"

namespace stripdet {
namespace {

using testing::fixed_sample;

Eigen::MatrixXd random_matrix(int r, int c, std::uint64_t seed) {
  CounterRng rng(seed);
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rng.uniform(-1, 1);
  return m;
}

long binomial(int n, int k) {
  long b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

TEST(WedgeIndex, EnumerationAndValidation) {
  for (int w = 1; w <= 4; ++w) {
    const auto all = WedgeIndex::all(w);
    EXPECT_EQ(static_cast<long>(all.size()), binomial(2 * w, w));
    EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
    EXPECT_EQ(all.front(), WedgeIndex::dirichlet(w));
  }
  EXPECT_THROW(WedgeIndex({1, 1}, 2), ConfigError);
  EXPECT_THROW(WedgeIndex({1, 5}, 2), ConfigError);
  EXPECT_THROW(WedgeIndex({1}, 2), ConfigError);
}

TEST(UnitFrameBasis, WidthOne) {
  const auto u1 = lemma_basis(WedgeIndex({1}, 1));
  EXPECT_EQ(u1.top()(0, 0), 1.0);
  EXPECT_EQ(u1.bottom()(0, 0), 0.0);
  const auto u2 = lemma_basis(WedgeIndex({2}, 1));
  EXPECT_EQ(u2.top()(0, 0), 1.0);
  EXPECT_EQ(u2.bottom()(0, 0), 1.0);
}

TEST(UnitFrameBasis, WidthTwoMixedIndex) {
  const auto u = lemma_basis(WedgeIndex({1, 3}, 2));
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(4, 2);
  expect(0, 0) = 1;
  expect(1, 1) = 1;
  expect(2, 1) = 1;
  EXPECT_EQ((u.columns - expect).norm(), 0.0);
  EXPECT_TRUE(u.top().isIdentity(0.0));
  EXPECT_DOUBLE_EQ(u.bottom().operatorNorm(), 1.0);
}

TEST(UnitFrameBasis, StructureForAllIndices) {
  for (int w = 1; w <= kMaxExteriorWidth; ++w) {
    for (const auto& a : WedgeIndex::all(w)) {
      const auto u = lemma_basis(a);
      EXPECT_TRUE(u.top().isIdentity(0.0));
      EXPECT_LE(u.bottom().operatorNorm(), 1.0 + 1e-15);
      for (int j = 0; j < w; ++j) {
        const double s = u.bottom().col(j).sum();
        EXPECT_TRUE(s == 0.0 || s == 1.0);
      }
    }
  }
}

TEST(ExpandStandard, WidthOne) {
  const auto e1 = expand_standard(WedgeIndex({1}, 1));
  ASSERT_EQ(e1.size(), 1u);
  EXPECT_EQ(e1[0].first, WedgeIndex({1}, 1));
  EXPECT_EQ(e1[0].second, 1);
  auto e2 = expand_standard(WedgeIndex({2}, 1));
  std::sort(e2.begin(), e2.end());
  ASSERT_EQ(e2.size(), 2u);
  EXPECT_EQ(e2[0], std::make_pair(WedgeIndex({1}, 1), -1));
  EXPECT_EQ(e2[1], std::make_pair(WedgeIndex({2}, 1), 1));
}

TEST(ExpandStandard, ReconstructsStandardWedges) {
  for (int w = 1; w <= 3; ++w) {
    for (const auto& a : WedgeIndex::all(w)) {
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(binomial(2 * w, w));
      for (const auto& [b, c] : expand_standard(a)) {
        EXPECT_TRUE(c == 1 || c == -1);
        sum += c * wedge_coordinates(lemma_basis(b));
      }
      EXPECT_LT((sum - wedge_coordinates(standard_frame(a))).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(WedgeInner, StandardFramesAreOrthonormal) {
  const auto all = WedgeIndex::all(2);
  for (const auto& a : all)
    for (const auto& b : all)
      EXPECT_EQ(wedge_inner(standard_frame(a), standard_frame(b)), a == b ? 1.0 : 0.0);
}

TEST(WedgeInner, GramDeterminant) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const WedgeFrame u{random_matrix(6, 3, s)};
    const WedgeFrame v{random_matrix(6, 3, s + 100)};
    const double uu = wedge_inner(u, u);
    EXPECT_GE(uu, 0.0);
    const Eigen::VectorXd cu = wedge_coordinates(u), cv = wedge_coordinates(v);
    EXPECT_NEAR(uu, cu.squaredNorm(), 1e-12 * std::max(1.0, uu));
    EXPECT_NEAR(wedge_inner(u, v), cu.dot(cv), 1e-12);
  }
}

TEST(Minor, IdentityMatrix) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
  for (const auto& a : WedgeIndex::all(2))
    for (const auto& b : WedgeIndex::all(2)) {
      const auto m = minor(b, a, id);
      if (a == b) {
        EXPECT_EQ(m.sign, 1);
        EXPECT_EQ(m.log_abs, 0.0);
      } else {
        EXPECT_EQ(m.sign, 0);
      }
    }
}

TEST(Minor, DirichletMinorIsTransferRoute) {
  const auto spec = testing::uniform_spec(-2, 2, CouplingLaw::Kind::Adjacency, 3, 1);
  const auto s = sample_disorder(StripGeometry{3, 1, 12}, spec, 5);
  const auto d = WedgeIndex::dirichlet(3);
  const auto m = minor(d, d, s, 0.1, 12);
  const auto t = logdet_via_transfer(s, 0.1, 12);
  EXPECT_EQ(m.sign, t.sign);
  EXPECT_NEAR(m.log_abs, t.log_abs, 1e-10);
}

TEST(Minor, SampleFormMatchesDense) {
  const auto spec = testing::uniform_spec(-2, 2, CouplingLaw::Kind::Adjacency, 2, 1);
  const auto s = sample_disorder(StripGeometry{2, 1, 6}, spec, 15);
  const Eigen::MatrixXd t = transfer_product(s, -0.2, 6);
  for (const auto& a : WedgeIndex::all(2))
    for (const auto& b : WedgeIndex::all(2)) {
      const double dense = minor(b, a, t).value();
      const double scaled = minor(b, a, s, -0.2, 6).value();
      EXPECT_NEAR(scaled, dense, 1e-9 * std::max(1.0, std::abs(dense)));
    }
}

TEST(Compound, ActsOnDecomposableVectors) {
  for (int w = 1; w <= 3; ++w) {
    const Eigen::MatrixXd t = random_matrix(2 * w, 2 * w, 40 + w);
    const WedgeFrame u{random_matrix(2 * w, w, 50 + w)};
    const Eigen::VectorXd lhs = compound(t) * wedge_coordinates(u);
    const Eigen::VectorXd rhs = wedge_coordinates(WedgeFrame{t * u.columns});
    EXPECT_LT((lhs - rhs).norm(), 1e-12 * std::max(1.0, rhs.norm()));
  }
}

TEST(Compound, WidthOneIsIdentityMap) {
  const Eigen::MatrixXd t = random_matrix(2, 2, 3);
  EXPECT_LT((compound(t) - t).norm(), 1e-15);
}

TEST(BoundaryOperator, DirichletFramesLeaveHamiltonianUnchanged) {
  const auto spec = testing::uniform_spec(-2, 2, CouplingLaw::Kind::Adjacency, 2, 1);
  const auto s = sample_disorder(StripGeometry{2, 1, 4}, spec, 9);
  const auto d = standard_frame(WedgeIndex::dirichlet(2));
  const auto op = boundary_operator(s, d, d, 4);
  EXPECT_EQ((op.matrix - assemble_hamiltonian(s, Region::strip(s.geometry())).matrix).norm(), 0.0);
  EXPECT_TRUE(op.symmetric);
}

TEST(BoundaryOperator, ScalarSubstitution) {
  const auto s = fixed_sample(1, 3, {0.5, 1.5, -0.5}, Eigen::MatrixXd::Zero(1, 1));
  const double b = 0.75, c = -2.0;
  Eigen::MatrixXd u(2, 1), v(2, 1);
  u << 1, b;
  v << 1, c;
  const auto op = boundary_operator(s, WedgeFrame{u}, WedgeFrame{v}, 3);
  EXPECT_DOUBLE_EQ(op.matrix(0, 0), 0.5 - b);
  EXPECT_DOUBLE_EQ(op.matrix(2, 2), -0.5 + c);
  EXPECT_DOUBLE_EQ(op.matrix(1, 1), 1.5);
}

TEST(BoundaryOperator, SingularTopBlockThrows) {
  const auto s = fixed_sample(1, 2, {0.0, 0.0}, Eigen::MatrixXd::Zero(1, 1));
  Eigen::MatrixXd u(2, 1);
  u << 0, 1;
  EXPECT_THROW(boundary_operator(s, WedgeFrame{u}, WedgeFrame{u}, 2), SingularityError);
}

TEST(BoundaryOperator, UnitFramesPerturbByAtMostTwo) {
  const auto spec = testing::uniform_spec(-2, 2, CouplingLaw::Kind::Adjacency, 3, 1);
  const auto s = sample_disorder(StripGeometry{3, 1, 5}, spec, 10);
  const double h = assemble_hamiltonian(s, Region::strip(s.geometry())).matrix.operatorNorm();
  for (const auto& a : WedgeIndex::all(3))
    for (const auto& b : WedgeIndex::all(3)) {
      const auto op = boundary_operator(s, lemma_basis(a), lemma_basis(b), 5);
      EXPECT_LE(op.matrix.operatorNorm(), h + 2.0 + 1e-12);
    }
}

TEST(BoundaryIdentity, HandComputedExample) {
  // W = 1, N = 2, V = (1, 2), U = 0, E = 0, u = [1; 1], v = [1; 0].
  const auto s = fixed_sample(1, 2, {1.0, 2.0}, Eigen::MatrixXd::Zero(1, 1));
  Eigen::MatrixXd u(2, 1), v(2, 1);
  u << 1, 1;
  v << 1, 0;
  // T = [[2, -1], [1, 0]] [[1, -1], [1, 0]] = [[1, -2], [1, -1]]; [1 0] T [1; 1] = -1.
  // H(u, v) = [[1 - 1, -1], [-1, 2]], det = -1.
  const auto ic = prop44_check(s, 0.0, 2, WedgeFrame{u}, WedgeFrame{v});
  EXPECT_NEAR(ic.lhs.value(), -1.0, 1e-14);
  EXPECT_NEAR(ic.rhs.value(), -1.0, 1e-14);
  EXPECT_TRUE(ic.signs_equal);
  EXPECT_LT(ic.gap, 1e-14);
}

TEST(BoundaryIdentity, DirichletFramesGiveDeterminant) {
  const auto spec = testing::cauchy_spec(CouplingLaw::Kind::Adjacency, 2, 1);
  const auto s = sample_disorder(StripGeometry{2, 1, 9}, spec, 2);
  const auto d = standard_frame(WedgeIndex::dirichlet(2));
  const auto ic = prop44_check(s, 1.0, 9, d, d);
  const auto direct = logdet_via_transfer(s, 1.0, 9);
  EXPECT_NEAR(ic.lhs.log_abs, direct.log_abs, 1e-9);
  EXPECT_NEAR(ic.rhs.log_abs, direct.log_abs, 1e-9);
}

TEST(BoundaryIdentity, RandomFramePairs) {
  for (int w = 1; w <= 3; ++w) {
    const auto spec = testing::uniform_spec(-2, 2, CouplingLaw::Kind::Adjacency, w, 1);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const int n = 4 + static_cast<int>(seed) * 6;
      const auto s = sample_disorder(StripGeometry{w, 1, n}, spec, 70 + seed);
      for (const auto& a : WedgeIndex::all(w))
        for (const auto& b : WedgeIndex::all(w)) {
          const auto ic = prop44_check(s, 0.5, n, lemma_basis(a), lemma_basis(b));
          EXPECT_TRUE(ic.signs_equal);
          EXPECT_LE(ic.gap, route_tolerance(ic.rhs.log_abs, static_cast<long>(n) * w, ic.rcond));
        }
    }
  }
}

TEST(BoundaryIdentity, GeneralFrames) {
  const auto spec = testing::uniform_spec(-2, 2, CouplingLaw::Kind::RandomBand, 2, 2);
  const auto s = sample_disorder(StripGeometry{2, 2, 5}, spec, 123);
  const WedgeFrame u{random_matrix(4, 2, 1)};
  const WedgeFrame v{random_matrix(4, 2, 2)};
  const auto ic = prop44_check(s, 0.0, 5, u, v);
  const double dense = (v.columns.transpose() * transfer_product(s, 0.0, 5) * u.columns).determinant();
  EXPECT_NEAR(ic.rhs.value(), dense, 1e-10 * std::abs(dense));
  EXPECT_NEAR(ic.lhs.value(), dense, 1e-8 * std::abs(dense));
}

TEST(SylvesterFranke, WidthOne) {
  const auto spec = testing::cauchy_spec(CouplingLaw::Kind::Zero);
  const auto s = sample_disorder(StripGeometry{1, 1, 20}, spec, 4);
  EXPECT_LT(sylvester_franke_check(s, 0.3, 20), 1e-10);
}

TEST(SylvesterFranke, SingleFactorDenseDeterminant) {
  const auto spec = testing::uniform_spec(-2, 2, CouplingLaw::Kind::Adjacency, 2, 1);
  const auto s = sample_disorder(StripGeometry{2, 1, 1}, spec, 6);
  const Eigen::MatrixXd c = compound(one_step(s_matrix(s, 1), 0.7));
  ASSERT_EQ(c.rows(), 6);
  EXPECT_NEAR(std::abs(c.determinant()), 1.0, 1e-10);
  EXPECT_LT(sylvester_franke_check(s, 0.7, 1), 1e-10);
}

TEST(SylvesterFranke, WidthThreeEightColumns) {
  const auto spec = testing::uniform_spec(-2, 2, CouplingLaw::Kind::Adjacency, 3, 1);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = sample_disorder(StripGeometry{3, 1, 8}, spec, seed);
    EXPECT_LT(sylvester_franke_check(s, 0.0, 8), 1e-6 * 8);
  }
}

TEST(FrameGap, EnumerationOracleWidthOne) {
  const std::vector<double> v{0.3, -1.1, 0.8, 1.9};
  const auto s = fixed_sample(1, 4, v, Eigen::MatrixXd::Zero(1, 1));
  const double e = 0.2;
  auto chain = [&](double first, double last) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i < 4; ++i) h(i, i) = v[i] - e;
    for (int i = 0; i < 3; ++i) h(i, i + 1) = h(i + 1, i) = -1;
    h(0, 0) -= first;
    h(3, 3) += last;
    return std::log(std::abs(h.determinant()));
  };
  const double b[2] = {0.0, 1.0};  // bottom block of u_{1}, u_{2}
  const auto fg = lemma45_gap(s, e, 4);
  ASSERT_EQ(fg.pair_logs.size(), 4u);
  EXPECT_NEAR(fg.dirichlet_log, chain(0, 0), 1e-12);
  double worst = -INFINITY;
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) {
      const double oracle = chain(b[a], b[c]);
      EXPECT_NEAR(fg.pair_logs[static_cast<std::size_t>(2 * a + c)], oracle, 1e-12);
      worst = std::max(worst, oracle - chain(0, 0));
    }
  EXPECT_NEAR(fg.max_gap, worst, 1e-12);
  EXPECT_GE(fg.max_gap, 0.0);  // the Dirichlet pair contributes 0
}

TEST(NormMinorsConstant, MatchesDefinition) {
  const Eigen::MatrixXd t = random_matrix(4, 4, 77);
  const double c = norm_minors_constant(t);
  const Eigen::MatrixXd comp = compound(t);
  double total = 0.0;
  for (const auto& a : WedgeIndex::all(2))
    for (const auto& b : WedgeIndex::all(2))
      total += std::abs(wedge_inner(lemma_basis(b), WedgeFrame{t * lemma_basis(a).columns}));
  const double norm = Eigen::JacobiSVD<Eigen::MatrixXd>(comp).singularValues()(0);
  EXPECT_NEAR(norm, std::exp(2 * c) * total, 1e-10 * norm);
}

}  // namespace
}  // namespace stripdet
